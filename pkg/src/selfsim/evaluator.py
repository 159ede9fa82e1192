"""Evaluation of the fixed point of G on hierarchical grids and at points.

Grid values are produced by the word recursion

    f(S_j(t)) = d_j f(t) + c_hat_j t + beta_hat_j,

applied to the previous level, which gives the fixed point exactly (up to
rounding) on every level-k grid A_k.  The literal iteration f_k = G(f_{k-1})
on piecewise-linear functions is kept separately in :func:`apply_operator`
and :func:`operator_iterates`; it uses the operator-form coefficients and
serves as an independent check of the grid values.
"""

from __future__ import annotations

import io
import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityExceeded, IndexOutOfRange, InvalidParams, NotContinuous
from .params import SelfSimilarParams, check_continuity, to_plain

Word = tuple[int, ...]

DEFAULT_MAX_POINTS = 2**26
# largest cell batch materialised at once by level_cells
BATCH_LEVEL_CELLS = 2**18


def max_points() -> int:
    raw = os.environ.get("SELFSIM_MAX_POINTS")
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_POINTS


def grid_size(n: int, k: int) -> int:
    return n**k + 1


def _check_capacity(n: int, k: int) -> None:
    if k < 0:
        raise InvalidParams(f"level must be >= 0, got {k}")
    limit = max_points()
    if k * math.log(n) > math.log(limit) + 1 or grid_size(n, k) > limit:
        raise CapacityExceeded(f"level {k} grid has {n}^{k}+1 points, limit is {limit}")


@dataclass(frozen=True)
class GridFunction:
    """Values of the fixed point on the level-``level`` grid A_k."""

    level: int
    xs: np.ndarray
    ys: np.ndarray

    def __len__(self):
        return len(self.xs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,f\n")
        for x, y in zip(self.xs.tolist(), self.ys.tolist()):
            buf.write(f"{x!r},{y!r}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class CellSummary:
    word: Word
    left: float
    right: float
    length: float
    dprod: float
    fleft: float
    fright: float


def endpoint_values(p: SelfSimilarParams) -> tuple[float, float]:
    """f(0) and f(1) of the bounded fixed point, from the two boundary cells.

    For continuous parameter sets these coincide with ``p.f0``/``p.f1``.
    """
    # 0 = S_1(t0), 1 = S_n(t1)
    t0 = 1.0 if p.e[0] else 0.0
    t1 = 0.0 if p.e[-1] else 1.0
    # unknowns (u, v) = (f(0), f(1)); f(t) picks u or v by t
    m = np.zeros((2, 2))
    rhs = np.array([p.c_hat[0] * t0 + p.beta_hat[0], p.c_hat[-1] * t1 + p.beta_hat[-1]])
    m[0, 0] = 1.0
    m[0, int(t0)] -= p.d[0]
    m[1, 1] = 1.0
    m[1, int(t1)] -= p.d[-1]
    u, v = np.linalg.solve(m, rhs)
    return float(u), float(v)


def boundary_values(p: SelfSimilarParams, check: bool) -> tuple[float, float]:
    if any(p.e):
        return endpoint_values(p)
    verdict = check_continuity(p)
    if verdict.passed:
        return p.f0, p.f1
    if check:
        raise NotContinuous("continuity conditions fail", verdict.violations)
    return endpoint_values(p)


def _grid(p: SelfSimilarParams, k: int, f_left: float, f_right: float):
    _check_capacity(p.n, k)
    xs = np.array([0.0, 1.0])
    ys = np.array([f_left, f_right])
    alpha = p.alpha
    for _ in range(k):
        m = len(xs) - 1
        new_x = np.empty(p.n * m + 1)
        new_y = np.empty(p.n * m + 1)
        for j in range(p.n):
            bx = p.a[j] * xs + alpha[j] if not p.e[j] else -p.a[j] * xs + alpha[j + 1]
            by = p.d[j] * ys + p.c_hat[j] * xs + p.beta_hat[j]
            if p.e[j]:
                bx, by = bx[::-1], by[::-1]
            bx[0], bx[-1] = alpha[j], alpha[j + 1]
            # shared boundary alpha_{j+1} belongs to the left cell
            lo = j * m
            if j == 0:
                new_x[0 : m + 1] = bx
                new_y[0 : m + 1] = by
            else:
                new_x[lo + 1 : lo + m + 1] = bx[1:]
                new_y[lo + 1 : lo + m + 1] = by[1:]
        xs, ys = new_x, new_y
    return xs, ys


def grid_points(p: SelfSimilarParams, k: int) -> np.ndarray:
    """The level-k grid A_k: n**k + 1 sorted points, nested in A_{k+1}."""
    xs, _ = _grid(p, k, 0.0, 0.0)
    return xs


def iterate(p: SelfSimilarParams, k: int, check: bool = True) -> GridFunction:
    """Exact fixed-point values on A_k.

    With ``check=False`` a parameter set failing the continuity conditions
    is still evaluated: the values are those of the bounded (discontinuous)
    fixed point, using the left-cell convention at cell boundaries.
    """
    f_left, f_right = boundary_values(p, check)
    xs, ys = _grid(p, k, f_left, f_right)
    return GridFunction(k, xs, ys)


# --- words and cells -------------------------------------------------------

def _check_word(p: SelfSimilarParams, w: Sequence[int]) -> None:
    for j in w:
        if not 1 <= j <= p.n:
            raise IndexOutOfRange(f"word digit {j} outside 1..{p.n}")


def cell(p: SelfSimilarParams, w: Sequence[int]) -> CellSummary:
    """Endpoint data of the cell S_w([0,1]), S_w = S_{j_N} o ... o S_{j_1}.

    Tracks f(S_w(t)) = D f(t) + L t + B and S_w(t) = A t + X while the
    digits are applied from j_1 outwards.
    """
    w = tuple(int(j) for j in w)
    _check_word(p, w)
    f_left, f_right = boundary_values(p, check=False)
    D, L, B, A, X = 1.0, 0.0, 0.0, 1.0, 0.0
    length = 1.0
    for j in w:
        i = j - 1
        dj, cj, bj = p.d[i], p.c_hat[i], p.beta_hat[i]
        D, L, B = dj * D, dj * L + cj * A, dj * B + cj * X + bj
        if p.e[i]:
            A, X = -p.a[i] * A, -p.a[i] * X + p.alpha[i + 1]
        else:
            A, X = p.a[i] * A, p.a[i] * X + p.alpha[i]
        length *= p.a[i]
    return CellSummary(
        word=w,
        left=X,
        right=A + X,
        length=length,
        dprod=D,
        fleft=D * f_left + B,
        fright=D * f_right + L + B,
    )


def word_from_index(n: int, level: int, index: int) -> Word:
    """Inverse of the batch ordering used by :func:`level_cells`.

    The outermost digit j_N is the most significant base-n digit, so for
    e = 0 the index order coincides with left-to-right cell order.
    """
    digits = []
    for _ in range(level):
        index, r = divmod(index, n)
        digits.append(r + 1)
    return tuple(digits)


@dataclass(frozen=True)
class CellBatch:
    """Affine states of consecutive level cells, indices start..start+len-1.

    On each cell f(S_w(t)) = D f(t) + L t + B and S_w(t) = A t + X.
    """

    level: int
    start: int
    D: np.ndarray
    L: np.ndarray
    B: np.ndarray
    A: np.ndarray
    X: np.ndarray

    def __len__(self):
        return len(self.D)

    @property
    def length(self) -> np.ndarray:
        return np.abs(self.A)


def _extend(p: SelfSimilarParams, state, j: int):
    D, L, B, A, X = state
    dj, cj, bj = p.d[j], p.c_hat[j], p.beta_hat[j]
    if p.e[j]:
        nA, nX = -p.a[j] * A, -p.a[j] * X + p.alpha[j + 1]
    else:
        nA, nX = p.a[j] * A, p.a[j] * X + p.alpha[j]
    return dj * D, dj * L + cj * A, dj * B + cj * X + bj, nA, nX


def _level_states(p: SelfSimilarParams, level: int):
    one = np.ones(1)
    state = (one, np.zeros(1), np.zeros(1), one.copy(), np.zeros(1))
    for _ in range(level):
        parts = [_extend(p, state, j) for j in range(p.n)]
        state = tuple(np.concatenate([part[i] for part in parts]) for i in range(5))
    return state


def level_cells(p: SelfSimilarParams, level: int, batch_cells: int = BATCH_LEVEL_CELLS) -> Iterator[CellBatch]:
    """Yield all n**level cells of a level in deterministic batches."""
    if level < 0:
        raise InvalidParams("level must be >= 0")
    base = level
    while base > 0 and p.n**base > batch_cells:
        base -= 1
    base_state = _level_states(p, base)
    size = p.n**base
    outer = level - base
    # digits = (j_level, ..., j_{base+1}), most significant first
    for count, digits in enumerate(itertools.product(range(p.n), repeat=outer)):
        state = base_state
        for j in reversed(digits):
            state = _extend(p, state, j)
        yield CellBatch(level, count * size, *state)


# --- point evaluation ------------------------------------------------------

def _first_step_deviation(p: SelfSimilarParams, f_left: float, f_right: float) -> float:
    """sup |G(f_lin) - f_lin| with f_lin the chord through the endpoints."""
    xs, ys = _grid(p, 1, f_left, f_right)
    chord = f_left + (f_right - f_left) * xs
    return float(np.max(np.abs(ys - chord)))


def eval_point(p: SelfSimilarParams, x: float, tol: float = 1e-12, max_depth: int = 100_000) -> tuple[float, float]:
    """Evaluate f(x) by descending through the cell containing x.

    Returns ``(value, error_bound)``.  After N digits,
    f(x) = D f(t) + L t + B with |D| <= max|d|**N; replacing f(t) by the
    chord through (0, f0), (1, f1) costs at most
    |D| * sup|G(chord) - chord| / (1 - max|d|), which is the returned bound.
    Boundary convention: a partition point belongs to the cell on its left,
    except x = 0 which belongs to the first cell.
    """
    if not 0.0 <= x <= 1.0:
        raise InvalidParams(f"x={x} outside [0, 1]")
    if tol <= 0:
        raise InvalidParams("tol must be positive")
    md = p.max_abs_d
    if md >= 1.0:
        raise InvalidParams("contraction condition max|d_k| < 1 fails")
    f_left, f_right = boundary_values(p, check=True)
    scale = _first_step_deviation(p, f_left, f_right) / (1.0 - md)
    alpha = p.alpha
    D, L, B = 1.0, 0.0, 0.0
    t = float(x)
    snap = 4 * np.finfo(float).eps
    for _ in range(max_depth):
        if t <= snap:
            return D * f_left + B, 0.0
        if t >= 1.0 - snap:
            return D * f_right + L + B, 0.0
        bound = abs(D) * scale
        if bound <= tol:
            chord = f_left + (f_right - f_left) * t
            return D * chord + L * t + B, bound
        k = int(np.searchsorted(alpha, t, side="left")) - 1
        k = min(max(k, 0), p.n - 1)
        if p.e[k]:
            u, sgn, off = (alpha[k + 1] - t) / p.a[k], -1.0, alpha[k + 1]
        else:
            u, sgn, off = (t - alpha[k]) / p.a[k], 1.0, alpha[k]
        u = min(max(u, 0.0), 1.0)
        # f(x) = D f(t) + L t + B with t = sgn a_k u + off and
        # f(t) = d_k f(u) + c_hat_k u + beta_hat_k
        D, L, B = (
            D * p.d[k],
            D * p.c_hat[k] + L * sgn * p.a[k],
            B + D * p.beta_hat[k] + L * off,
        )
        t = u
    raise InvalidParams(f"tolerance {tol} not reached within {max_depth} digits")


# --- literal operator iteration ---------------------------------------------

def apply_operator(p: SelfSimilarParams, xs: np.ndarray, ys: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate [G f](t) for the piecewise-linear f through (xs, ys).

    Uses the operator-form coefficients (c_k, beta_k) and half-open cells
    (alpha_k, alpha_{k+1}], the first cell being closed.
    """
    plain = to_plain(p)
    t = np.asarray(t, dtype=float)
    alpha = np.asarray(p.alpha)
    k = np.clip(np.searchsorted(alpha, t, side="left") - 1, 0, p.n - 1)
    a = np.asarray(p.a)[k]
    e = np.asarray(p.e)[k]
    u = np.where(e, (alpha[k + 1] - t) / a, (t - alpha[k]) / a)
    u = np.clip(u, 0.0, 1.0)
    d = np.asarray(p.d)[k]
    c = np.asarray(plain.c)[k]
    beta = np.asarray(plain.beta)[k]
    return d * np.interp(u, xs, ys) + c * t + beta


def operator_iterates(p: SelfSimilarParams, k_max: int) -> list[float]:
    """Sup distances ||f_{k+1} - f_k|| for k = 0..k_max of f_k = G(f_{k-1}).

    f_0 is the chord f0 + (f1 - f0) x.  Each f_k is piecewise linear with
    nodes A_k, so sup norms are maxima over the nodes of A_{k+1}.
    """
    xs = np.array([0.0, 1.0])
    ys = np.array([p.f0, p.f1])
    dists = []
    for k in range(k_max + 1):
        nodes = grid_points(p, k + 1)
        new = apply_operator(p, xs, ys, nodes)
        dists.append(float(np.max(np.abs(new - np.interp(nodes, xs, ys)))))
        xs, ys = nodes, new
    return dists
