"""Self-similarity parameter sets: construction, conversion and validation.

A parameter set describes the operator

    [G f](x) = d_k f(S_k^{-1}(x)) + c_k x + beta_k,   x in cell k,

on the partition of [0, 1] into cells of lengths ``a_1, ..., a_n``.  We store
the graph-form ("hat") coefficients, in which the same operator reads

    f(S_k(t)) = d_k f(t) + c_hat_k t + beta_hat_k,    t in [0, 1].

All indices exposed by the public API (cell index ``k``, word digits,
``i0``) are 1-based so that reports line up with the usual mathematical
notation.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Sequence

from .errors import IndexOutOfRange, InvalidParams, ParseError, UnsupportedOrientation

TOL = 1e-12


def as_float(value: Any) -> float:
    """Convert numbers and fraction strings such as ``"1/3"`` to float."""
    if isinstance(value, bool):
        raise InvalidParams(f"expected a number, got {value!r}")
    if isinstance(value, (int, float, Fraction)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"cannot parse number {value!r}") from exc
    raise InvalidParams(f"expected a number, got {value!r}")


def _floats(values: Sequence[Any], name: str) -> tuple[float, ...]:
    try:
        return tuple(as_float(v) for v in values)
    except TypeError as exc:
        raise InvalidParams(f"{name} must be a list of numbers") from exc


@dataclass(frozen=True)
class SelfSimilarParams:
    """Immutable parameter set (n, a, e, d, c_hat, beta_hat, f0, f1).

    Construction checks the structural invariants only (lengths, positivity
    and ``sum(a) == 1``); contraction and continuity are separate checks so
    that invalid sets can still be inspected and reported on.
    """

    n: int
    a: tuple[float, ...]
    e: tuple[bool, ...]
    d: tuple[float, ...]
    c_hat: tuple[float, ...]
    beta_hat: tuple[float, ...]
    f0: float = 0.0
    f1: float = 1.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise InvalidParams(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "a", _floats(self.a, "a"))
        object.__setattr__(self, "d", _floats(self.d, "d"))
        object.__setattr__(self, "c_hat", _floats(self.c_hat, "c_hat"))
        object.__setattr__(self, "beta_hat", _floats(self.beta_hat, "beta_hat"))
        object.__setattr__(self, "e", tuple(bool(v) for v in self.e))
        object.__setattr__(self, "f0", as_float(self.f0))
        object.__setattr__(self, "f1", as_float(self.f1))
        for fname in ("a", "e", "d", "c_hat", "beta_hat"):
            if len(getattr(self, fname)) != self.n:
                raise InvalidParams(
                    f"{fname} has length {len(getattr(self, fname))}, expected n={self.n}"
                )
        values = self.a + self.d + self.c_hat + self.beta_hat + (self.f0, self.f1)
        if not all(math.isfinite(v) for v in values):
            raise InvalidParams("parameters must be finite")
        if any(ak <= 0.0 for ak in self.a):
            raise InvalidParams(f"all a_k must be positive, got {self.a}")
        total = math.fsum(self.a)
        if abs(total - 1.0) > TOL:
            raise InvalidParams(f"sum of a_k is {total!r}, expected 1")

    @cached_property
    def alpha(self) -> tuple[float, ...]:
        acc = [0.0]
        for k in range(1, self.n):
            acc.append(math.fsum(self.a[:k]))
        acc.append(1.0)
        return tuple(acc)

    @property
    def max_abs_d(self) -> float:
        return max(abs(v) for v in self.d)

    def replace(self, **changes) -> "SelfSimilarParams":
        data = {f: getattr(self, f) for f in ("n", "a", "e", "d", "c_hat", "beta_hat", "f0", "f1", "name")}
        data.update(changes)
        return SelfSimilarParams(**data)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "a": list(self.a),
            "e": list(self.e),
            "d": list(self.d),
            "c_hat": list(self.c_hat),
            "beta_hat": list(self.beta_hat),
            "f0": self.f0,
            "f1": self.f1,
        }


@dataclass(frozen=True)
class PlainParams:
    """Operator-form slope and offset coefficients (c_k, beta_k)."""

    c: tuple[float, ...]
    beta: tuple[float, ...]


class RegimeKind(enum.Enum):
    LIPSCHITZ = "LIPSCHITZ"
    CRITICAL = "CRITICAL"
    SUPER_CRITICAL = "SUPER_CRITICAL"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    i0: int | None = None  # 1-based, SUPER_CRITICAL only


@dataclass(frozen=True)
class Violation:
    equation: str
    k: int | None
    residual: float


@dataclass(frozen=True)
class ContinuityVerdict:
    passed: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self):
        return self.passed


def make_params(n, a, d, c_hat=None, beta_hat=None, f0=0.0, f1=1.0, e=None, name="") -> SelfSimilarParams:
    """Convenience constructor; missing ``c_hat``/``e`` default to zeros."""
    if c_hat is None:
        c_hat = [0.0] * n
    if e is None:
        e = [False] * n
    if beta_hat is None:
        beta_hat = derive_offsets(n, a, d, c_hat, f0, f1)
    return SelfSimilarParams(n, tuple(a), tuple(e), tuple(d), tuple(c_hat), tuple(beta_hat), f0, f1, name)


def partition_points(p: SelfSimilarParams) -> list[float]:
    """Return the cell boundaries 0 = alpha_1 < ... < alpha_{n+1} = 1."""
    return list(p.alpha)


def affine_map(p: SelfSimilarParams, k: int, x: float) -> float:
    """Apply S_k (1-based ``k``) to ``x``; orientation-reversing when e_k is set."""
    if not 1 <= k <= p.n:
        raise IndexOutOfRange(f"k={k} outside 1..{p.n}")
    i = k - 1
    if p.e[i]:
        return -p.a[i] * x + p.alpha[i + 1]
    return p.a[i] * x + p.alpha[i]


def to_plain(p: SelfSimilarParams) -> PlainParams:
    c, beta = [], []
    for i in range(p.n):
        if p.e[i]:
            c.append(-p.c_hat[i] / p.a[i])
            beta.append(p.beta_hat[i] + p.c_hat[i] * p.alpha[i + 1] / p.a[i])
        else:
            c.append(p.c_hat[i] / p.a[i])
            beta.append(p.beta_hat[i] - p.c_hat[i] * p.alpha[i] / p.a[i])
    return PlainParams(tuple(c), tuple(beta))


def _hat_from_plain(n, a, e, c, beta):
    a = _floats(a, "a")
    c = _floats(c, "c")
    beta = _floats(beta, "beta") if beta is not None else None
    if len(a) != n or len(c) != n or (beta is not None and len(beta) != n):
        raise InvalidParams("a, c and beta must all have length n")
    if any(ak <= 0.0 for ak in a):
        raise InvalidParams("all a_k must be positive")
    alpha = [math.fsum(a[:k]) for k in range(n)] + [1.0]
    c_hat, beta_hat = [], []
    for i in range(n):
        if e[i]:
            c_hat.append(-c[i] * a[i])
            if beta is not None:
                beta_hat.append(beta[i] + c[i] * alpha[i + 1])
        else:
            c_hat.append(c[i] * a[i])
            if beta is not None:
                beta_hat.append(beta[i] + c[i] * alpha[i])
    return c_hat, (beta_hat if beta is not None else None)


def from_plain(n, a, e, d, c, beta, f0, f1, name="") -> SelfSimilarParams:
    if e is None:
        e = [False] * n
    c_hat, beta_hat = _hat_from_plain(n, a, e, c, beta)
    return SelfSimilarParams(n, tuple(a), tuple(e), tuple(d), tuple(c_hat), tuple(beta_hat), f0, f1, name)


def check_contraction(p: SelfSimilarParams) -> tuple[bool, float]:
    m = p.max_abs_d
    return m < 1.0, m


def derive_offsets(n, a, d, c_hat, f0, f1) -> tuple[float, ...]:
    """Offsets beta_hat that glue neighbouring cells continuously.

    beta_hat_k = sum_{j<k} c_hat_j + f1 * sum_{j<k} d_j + f0 * (1 - sum_{j<=k} d_j)

    The closing condition on the last cell is not enforced here; it
    constrains (c_hat, d, f0, f1) and is reported by ``check_continuity``.
    """
    d = _floats(d, "d")
    c_hat = _floats(c_hat, "c_hat")
    f0, f1 = as_float(f0), as_float(f1)
    if not isinstance(n, int) or n < 2 or len(d) != n or len(c_hat) != n or len(a) != n:
        raise InvalidParams("n >= 2 and a, d, c_hat of length n are required")
    if max(abs(v) for v in d) >= 1.0:
        raise InvalidParams("contraction condition max|d_k| < 1 fails")
    out = []
    for k in range(n):
        out.append(
            math.fsum(c_hat[:k]) + f1 * math.fsum(d[:k]) + f0 * (1.0 - math.fsum(d[: k + 1]))
        )
    return tuple(out)


def continuity_residuals(p: SelfSimilarParams) -> list[Violation]:
    """Signed residuals of every continuity equation, including passing ones."""
    res = [Violation("5", None, p.max_abs_d - 1.0)]
    res.append(Violation("6", 1, p.beta_hat[0] - p.f0 * (1.0 - p.d[0])))
    for k in range(1, p.n):
        rhs = (
            math.fsum(p.c_hat[:k])
            + p.f1 * math.fsum(p.d[:k])
            + p.f0 * (1.0 - math.fsum(p.d[: k + 1]))
        )
        res.append(Violation("7", k + 1, p.beta_hat[k] - rhs))
    closing = math.fsum(p.c_hat) + (p.f1 - p.f0) * math.fsum(p.d) - (p.f1 - p.f0)
    res.append(Violation("8", None, closing))
    return res


def check_continuity(p: SelfSimilarParams, tol: float = TOL) -> ContinuityVerdict:
    if any(p.e):
        raise UnsupportedOrientation("continuity criteria require all e_k = 0")
    bad = []
    for v in continuity_residuals(p):
        if v.equation == "5":
            if v.residual >= 0.0:
                bad.append(v)
        elif abs(v.residual) > tol:
            bad.append(v)
    return ContinuityVerdict(not bad, tuple(bad))


def exponent_ratios(p: SelfSimilarParams) -> tuple[float, ...]:
    """Per-index ln|d_j| / ln a_j, with +inf where d_j = 0."""
    out = []
    for aj, dj in zip(p.a, p.d):
        out.append(math.inf if dj == 0.0 else math.log(abs(dj)) / math.log(aj))
    return tuple(out)


def argmin_ratio(ratios: Sequence[float]) -> int | None:
    """1-based index of the smallest finite ratio; first one on ties."""
    best, idx = math.inf, None
    for i, r in enumerate(ratios):
        if r < best:
            best, idx = r, i + 1
    return idx


def classify_regime(p: SelfSimilarParams, tol: float = TOL) -> Regime:
    scaled = [abs(dj) / aj for aj, dj in zip(p.a, p.d)]
    if any(s > 1.0 + tol for s in scaled):
        return Regime(RegimeKind.SUPER_CRITICAL, argmin_ratio(exponent_ratios(p)))
    if all(s < 1.0 - tol for s in scaled):
        return Regime(RegimeKind.LIPSCHITZ)
    return Regime(RegimeKind.CRITICAL)


# --- parameter files -------------------------------------------------------

_KNOWN_KEYS = {"n", "a", "e", "d", "c_hat", "c", "beta_hat", "beta", "f0", "f1", "derive_offsets", "name"}


def params_from_dict(data: dict) -> SelfSimilarParams:
    """Normalise a parameter document to hat form.

    Accepts either (c_hat, beta_hat) or (c, beta); with ``"derive_offsets":
    true`` the offsets are computed from the continuity equations.
    """
    if not isinstance(data, dict):
        raise ParseError("parameter document must be a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    for key in ("n", "a", "d"):
        if key not in data:
            raise ParseError(f"missing required key {key!r}")
    if "c_hat" in data and "c" in data:
        raise ParseError("give either 'c_hat' or 'c', not both")
    if "beta_hat" in data and "beta" in data:
        raise ParseError("give either 'beta_hat' or 'beta', not both")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("'n' must be an integer")
    a, d = data["a"], data["d"]
    e = [bool(v) for v in data.get("e", [False] * n)]
    f0 = data.get("f0", 0.0)
    f1 = data.get("f1", 1.0)
    derive = bool(data.get("derive_offsets", False))
    name = str(data.get("name", ""))
    if len(e) != n:
        raise InvalidParams(f"e has length {len(e)}, expected n={n}")

    if "c" in data:
        plain_beta = None if derive else data.get("beta")
        c_hat, beta_hat = _hat_from_plain(n, a, e, data["c"], plain_beta)
        if "beta_hat" in data and not derive:
            beta_hat = data["beta_hat"]
    else:
        c_hat = data.get("c_hat", [0.0] * n)
        beta_hat = data.get("beta_hat")
        if "beta" in data and not derive:
            # beta given with c_hat: convert through the plain form
            plain = to_plain(SelfSimilarParams(n, tuple(a), tuple(e), tuple(d), tuple(c_hat), (0.0,) * n, f0, f1))
            _, beta_hat = _hat_from_plain(n, a, e, plain.c, data["beta"])
    if derive:
        beta_hat = derive_offsets(n, a, d, c_hat, f0, f1)
    if beta_hat is None:
        raise ParseError("missing offsets: give 'beta_hat', 'beta' or set 'derive_offsets': true")
    return SelfSimilarParams(n, tuple(a), tuple(e), tuple(d), tuple(c_hat), tuple(beta_hat), f0, f1, name)


def load_params(path: str | Path) -> SelfSimilarParams:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise ParseError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {context}\n    {' ' * (exc.colno - 1)}^"
        ) from exc
    return params_from_dict(data)
