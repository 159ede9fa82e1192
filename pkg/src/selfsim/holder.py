"""Hölder exponents of self-similar functions: closed form and measured.

The closed form depends only on the per-index ratios ln|d_j| / ln a_j and on
how |d_j| compares with a_j.  The measured side works on cells S_w([0,1]):
the seminorm lower bound uses endpoint increments, the empirical exponent
uses oscillations sampled on a refined subgrid of every cell.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AllCellsFlat, InvalidParams, NotContinuous
from .evaluator import boundary_values, iterate, level_cells, word_from_index
from .params import (
    Regime,
    RegimeKind,
    SelfSimilarParams,
    argmin_ratio,
    check_continuity,
    classify_regime,
    exponent_ratios,
    to_plain,
)

FLAT_RELATIVE = 1e-13
_CHUNK_ENTRIES = 2**22


@dataclass(frozen=True)
class HolderReport:
    regime: Regime
    exponent: float
    attained: bool
    ratios: tuple[float, ...]
    argmin_index: int | None
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.kind.value,
            "exponent": self.exponent,
            "attained": self.attained,
            # JSON has no infinity; d_j = 0 is reported as null
            "ratios": [r if math.isfinite(r) else None for r in self.ratios],
            "argmin_index": self.argmin_index,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def is_affine(p: SelfSimilarParams, level: int = 2, tol: float = 1e-12) -> bool:
    """True when the level grid values lie on the chord through the endpoints.

    For e = 0 this is exact: if f agrees with its chord on A_1, the chord is
    itself a fixed point of G and therefore equals f.
    """
    g = iterate(p, level)
    chord = g.ys[0] + (g.ys[-1] - g.ys[0]) * g.xs
    scale = max(1.0, float(np.max(np.abs(g.ys))))
    return bool(np.max(np.abs(g.ys - chord)) <= tol * scale)


def analytic_exponent(p: SelfSimilarParams) -> HolderReport:
    verdict = check_continuity(p)
    if not verdict.passed:
        raise NotContinuous("continuity conditions fail", verdict.violations)
    regime = classify_regime(p)
    ratios = exponent_ratios(p)
    idx = argmin_ratio(ratios)
    if regime.kind is RegimeKind.SUPER_CRITICAL:
        return HolderReport(regime, ratios[regime.i0 - 1], True, ratios, regime.i0)
    if regime.kind is RegimeKind.LIPSCHITZ:
        return HolderReport(regime, 1.0, True, ratios, idx)
    if is_affine(p):
        return HolderReport(regime, 1.0, True, ratios, idx, note="fixed point is affine")
    scaled = [abs(dj) / aj for aj, dj in zip(p.a, p.d)]
    if all(math.isclose(s, 1.0, rel_tol=1e-12) for s in scaled):
        note = "Hölder for every exponent below 1; Lipschitz bound not attained"
    else:
        note = "mixed boundary case (some |d_i| = a_i, others smaller): exponent 1 not guaranteed"
    return HolderReport(regime, 1.0, False, ratios, idx, note=note)


# --- seminorm bounds -------------------------------------------------------

def seminorm_profile(p: SelfSimilarParams, alpha: float, L: int) -> list[float]:
    """Running maxima of |f(right) - f(left)| / length**alpha over cells.

    Entry N is the maximum over all words of length at most N, so the list
    has L + 1 entries and is nondecreasing.
    """
    if not 0.0 < alpha <= 1.0:
        raise InvalidParams(f"alpha must lie in (0, 1], got {alpha}")
    f_left, f_right = boundary_values(p, check=False)
    span = f_right - f_left
    best = abs(span)
    out = [best]
    for level in range(1, L + 1):
        for batch in level_cells(p, level):
            delta = batch.D * span + batch.L
            ratio = np.abs(delta) / batch.length**alpha
            best = max(best, float(np.max(ratio)))
        out.append(best)
    return out


def seminorm_lower(p: SelfSimilarParams, alpha: float, L: int) -> float:
    """Certified lower bound for the Hölder seminorm M(f, alpha)."""
    if L < 1:
        raise InvalidParams("L must be >= 1")
    return seminorm_profile(p, alpha, L)[-1]


@dataclass(frozen=True)
class BoundInputs:
    q: float  # max |d_j| / a_j**alpha
    c: float  # max |c_j| / a_j
    a: float  # max a_j
    normC: float  # upper bound for sup |f|


def sup_norm_bound(p: SelfSimilarParams, level: int = 8) -> float:
    """Upper bound for sup|f| from the level grid plus the tail of the iteration.

    sup|f - f_k| <= max|d|**k / (1 - max|d|) * sup|f_1 - f_0|, where f_k is
    the piecewise-linear interpolant of the level-k grid values.
    """
    md = p.max_abs_d
    g = iterate(p, level)
    g1 = iterate(p, 1)
    chord = g1.ys[0] + (g1.ys[-1] - g1.ys[0]) * g1.xs
    first = float(np.max(np.abs(g1.ys - chord)))
    return float(np.max(np.abs(g.ys))) + md**level / (1.0 - md) * first


def bound_inputs(p: SelfSimilarParams, alpha: float, level: int = 8) -> BoundInputs:
    plain = to_plain(p)
    return BoundInputs(
        q=max(abs(dj) / aj**alpha for aj, dj in zip(p.a, p.d)),
        c=max(abs(cj) / aj for aj, cj in zip(p.a, plain.c)),
        a=max(p.a),
        normC=sup_norm_bound(p, level),
    )


def seminorm_upper_rhs(b: BoundInputs, alpha: float, N: int, span: float = 1.0) -> float:
    """Bound on |Δf| / length**alpha for a word of length N.

    2 |f|_C q**N + c span**(1 - alpha) * sum_{i=1..N} q**(N-i) r**(i-1),
    r = a**(1 - alpha).  The geometric sum is taken in closed form unless
    q and r (nearly) coincide.
    """
    if N < 1:
        raise InvalidParams("N must be >= 1")
    if not 0.0 < span <= 1.0:
        raise InvalidParams("span must lie in (0, 1]")
    q = b.q
    r = b.a ** (1.0 - alpha)
    if abs(q - r) < 1e-14:
        geo = math.fsum(q ** (N - i) * r ** (i - 1) for i in range(1, N + 1))
    else:
        geo = (q**N - r**N) / (q - r)
    return 2.0 * b.normC * q**N + b.c * span ** (1.0 - alpha) * geo


def seminorm_upper_bound(p: SelfSimilarParams, alpha: float, n_max: int = 4096, level: int = 8) -> float:
    """sup over word lengths of :func:`seminorm_upper_rhs`; inf when unbounded.

    This dominates every value returned by :func:`seminorm_lower`.
    """
    b = bound_inputs(p, alpha, level)
    if b.q > 1.0 or (b.q == 1.0 and b.c > 0.0):
        return math.inf
    best = 2.0 * b.normC  # empty word
    for N in range(1, n_max + 1):
        best = max(best, seminorm_upper_rhs(b, alpha, N))
    return best


# --- empirical exponent ----------------------------------------------------

@dataclass
class OscillationTable:
    """Per-cell (level, word, length, oscillation) records."""

    n: int
    level: list = field(default_factory=list)
    index: list = field(default_factory=list)
    length: list = field(default_factory=list)
    osc: list = field(default_factory=list)

    def rows(self):
        for lv, idx, ln, os_ in zip(self.level, self.index, self.length, self.osc):
            for i, length, o in zip(idx.tolist(), ln.tolist(), os_.tolist()):
                yield lv, word_from_index(self.n, lv, i), length, o

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("level,word,length,osc\n")
        for lv, w, length, o in self.rows():
            buf.write(f"{lv},{'.'.join(map(str, w))},{length!r},{o!r}\n")
        return buf.getvalue()


def _cell_oscillations(D, L, T, F):
    out = np.empty(len(D))
    step = max(1, _CHUNK_ENTRIES // len(T))
    for lo in range(0, len(D), step):
        vals = D[lo : lo + step, None] * F[None, :] + L[lo : lo + step, None] * T[None, :]
        out[lo : lo + step] = vals.max(axis=1) - vals.min(axis=1)
    return out


def oscillation_table(p: SelfSimilarParams, L: int, refine: int = 4, measure: str = "osc") -> OscillationTable:
    """Oscillation of f on every cell of levels 1..L.

    ``measure="osc"`` samples each cell on the image of the level-``refine``
    grid; ``measure="endpoint"`` uses |f(right) - f(left)| only.
    """
    if measure not in ("osc", "endpoint"):
        raise InvalidParams(f"unknown measure {measure!r}")
    if refine < 0:
        raise InvalidParams("refine must be >= 0")
    base = iterate(p, refine)
    T, F = base.xs, base.ys
    span = F[-1] - F[0]
    table = OscillationTable(p.n)
    for lv in range(1, L + 1):
        for batch in level_cells(p, lv):
            if measure == "osc":
                osc = _cell_oscillations(batch.D, batch.L, T, F)
            else:
                osc = np.abs(batch.D * span + batch.L)
            table.level.append(lv)
            table.index.append(np.arange(batch.start, batch.start + len(batch)))
            table.length.append(batch.length)
            table.osc.append(osc)
    return table


@dataclass(frozen=True)
class EmpiricalEstimate:
    alpha_hat: float
    per_level: tuple[float, ...]  # alpha_hat_k for k = 1..L


def empirical_exponent(p: SelfSimilarParams, L: int, refine: int = 4, measure: str = "osc") -> EmpiricalEstimate:
    """Per-level estimates min ln(osc) / ln(length) over non-flat cells.

    For c = 0 and f0 != f1 with a monotone fixed point every cell
    oscillation is |prod d| |f1 - f0|, so with f1 - f0 = 1 each level
    reproduces the closed-form exponent exactly (pure words attain it).
    """
    if L < 1:
        raise InvalidParams("L must be >= 1")
    scale_grid = iterate(p, max(refine, 3))
    eps = FLAT_RELATIVE * float(np.max(np.abs(scale_grid.ys)))
    table = oscillation_table(p, L, refine, measure)
    per_level = {}
    for lv, length, osc in zip(table.level, table.length, table.osc):
        keep = osc > eps
        if np.any(keep):
            est = float(np.min(np.log(osc[keep]) / np.log(length[keep])))
            per_level[lv] = min(per_level.get(lv, math.inf), est)
    missing = [lv for lv in range(1, L + 1) if lv not in per_level]
    if missing:
        raise AllCellsFlat(f"every cell is flat at levels {missing}; the fixed point is constant")
    seq = tuple(per_level[lv] for lv in range(1, L + 1))
    return EmpiricalEstimate(seq[-1], seq)


def monotonicity_check(p: SelfSimilarParams, L: int) -> bool:
    """True when the level-L grid values are strictly increasing."""
    if L < 1:
        raise InvalidParams("L must be >= 1")
    g = iterate(p, L)
    return bool(np.all(np.diff(g.ys) > 0.0))
