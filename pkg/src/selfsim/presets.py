"""Named parameter families: Cantor, Takagi-Landsberg, Salem, Kiesswetter.

Presets are addressed by a small expression syntax, e.g. ``cantor``,
``takagi(4,1/4)``, ``salem(0.3,0.7)`` or
``salem_general(3,[1/5,1/2,3/10],[3/10,1/5,1/2])``.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams, ParseError, UnsupportedPreset
from .params import SelfSimilarParams, as_float, derive_offsets, make_params


@dataclass(frozen=True)
class Preset:
    kind: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.kind
        return f"{self.kind}({','.join(_fmt_arg(a) for a in self.args)})"


def _fmt_arg(a):
    if isinstance(a, tuple):
        return "[" + ",".join(_fmt_arg(v) for v in a) + "]"
    if isinstance(a, Fraction):
        return str(a)
    return repr(a)


def _in_open_unit(name, v):
    if not 0.0 < v < 1.0:
        raise InvalidParams(f"{name} must lie in (0, 1), got {v}")


def cantor() -> SelfSimilarParams:
    third = 1.0 / 3.0
    return SelfSimilarParams(
        n=3,
        a=(third, third, third),
        e=(False,) * 3,
        d=(0.5, 0.0, 0.5),
        c_hat=(0.0,) * 3,
        beta_hat=(0.0, 0.5, 0.5),
        f0=0.0,
        f1=1.0,
        name="cantor",
    )


def takagi(n: int, d) -> SelfSimilarParams:
    """T_{n,d}(x) = sum_k d^k s0(n^k x) for even n, as a fixed point.

    Slopes are +1/n on the left half of the cells and -1/n on the right
    half; offsets come from the continuity equations with f0 = f1 = 0.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidParams(f"takagi needs an integer n >= 2, got {n!r}")
    if n % 2:
        raise UnsupportedPreset(f"takagi is only self-similar in this scheme for even n, got n={n}")
    d = as_float(d)
    _in_open_unit("d", d)
    a = [1.0 / n] * n
    ds = [d] * n
    c_hat = [1.0 / n] * (n // 2) + [-1.0 / n] * (n // 2)
    beta_hat = derive_offsets(n, a, ds, c_hat, 0.0, 0.0)
    return make_params(n, a, ds, c_hat, beta_hat, f0=0.0, f1=0.0, name=f"takagi({n},{_fmt_arg(d)})")


def salem(a, d) -> SelfSimilarParams:
    a, d = as_float(a), as_float(d)
    _in_open_unit("a", a)
    _in_open_unit("d", d)
    if d == 0.5:
        warnings.warn("salem with d = 1/2 is excluded in the classical family", stacklevel=2)
    return make_params(
        2, [a, 1.0 - a], [d, 1.0 - d], [0.0, 0.0], [0.0, d], f0=0.0, f1=1.0,
        name=f"salem({_fmt_arg(a)},{_fmt_arg(d)})",
    )


def salem_general(n: int, a, d) -> SelfSimilarParams:
    a = [as_float(v) for v in a]
    d = [as_float(v) for v in d]
    if len(a) != n or len(d) != n:
        raise InvalidParams("salem_general needs n values for both a and d")
    for v in a:
        _in_open_unit("a_i", v)
    for v in d:
        _in_open_unit("d_i", v)
    if abs(math.fsum(d) - 1.0) > 1e-12:
        raise InvalidParams(f"sum of d_i must be 1, got {math.fsum(d)}")
    for i in range(n - 1):
        if math.isclose(d[i] / a[i], d[i + 1] / a[i + 1], rel_tol=1e-12):
            raise InvalidParams(f"d_i/a_i must differ between neighbours (i={i + 1})")
    beta_hat = [math.fsum(d[:j]) for j in range(n)]
    return make_params(n, a, d, [0.0] * n, beta_hat, f0=0.0, f1=1.0, name="salem_general")


def kiesswetter() -> SelfSimilarParams:
    a = [0.25] * 4
    d = [-0.5, 0.5, 0.5, 0.5]
    return make_params(4, a, d, [0.0] * 4, None, f0=0.0, f1=1.0, name="kiesswetter")


_BUILDERS = {
    "cantor": (cantor, "cantor", "Cantor ternary function"),
    "takagi": (takagi, "takagi(n,d)", "Takagi-Landsberg T_{n,d}, n even (Takagi 1903)"),
    "salem": (salem, "salem(a,d)", "Salem singular function S_{a,d} (Salem 1943)"),
    "salem_general": (
        salem_general,
        "salem_general(n,[a_1..a_n],[d_1..d_n])",
        "n-interval generalisation of the Salem function",
    ),
    "kiesswetter": (kiesswetter, "kiesswetter", "Kiesswetter curve K (Kiesswetter 1966)"),
}

DEFAULT_PRESETS = (
    "cantor",
    "takagi(2,1/2)",
    "takagi(4,1/4)",
    "takagi(2,1/4)",
    "salem(0.3,0.7)",
    "salem_general(3,[1/5,1/2,3/10],[3/10,1/5,1/2])",
    "kiesswetter",
)


# --- expression parsing ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+)?))")


def _parse_args(text: str):
    pos, stack, current = 0, [], []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot parse preset arguments at {text[pos:]!r}")
        pos = m.end()
        open_, close, comma, num = m.groups()
        if open_:
            stack.append(current)
            current = []
        elif close:
            if not stack:
                raise ParseError("unbalanced ']' in preset arguments")
            inner = tuple(current)
            current = stack.pop()
            current.append(inner)
        elif comma:
            continue
        else:
            value = Fraction(num)
            current.append(int(value) if "." not in num and "/" not in num and "e" not in num.lower() else value)
    if stack:
        raise ParseError("unbalanced '[' in preset arguments")
    return tuple(current)


def parse_preset(text: str) -> Preset:
    m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise ParseError(f"cannot parse preset {text!r}")
    kind = m.group(1).lower()
    if kind not in _BUILDERS:
        raise UnsupportedPreset(f"unknown preset {kind!r}; known: {', '.join(_BUILDERS)}")
    args = _parse_args(m.group(2)) if m.group(2) is not None else ()
    return Preset(kind, args)


def make(preset: Preset | str) -> SelfSimilarParams:
    if isinstance(preset, str):
        preset = parse_preset(preset)
    builder = _BUILDERS[preset.kind][0]
    args = [list(a) if isinstance(a, tuple) else a for a in preset.args]
    try:
        p = builder(*args)
    except TypeError as exc:
        raise ParseError(f"bad arguments for {preset.kind}: expected {_BUILDERS[preset.kind][1]}") from exc
    return p.replace(name=str(preset))


def reference_value(preset: Preset | str, x: float) -> float | None:
    """Closed-form value where one is known, otherwise None."""
    if isinstance(preset, str):
        preset = parse_preset(preset)
    if preset.kind == "takagi" and len(preset.args) == 2:
        n, d = preset.args
        if n == 2 and as_float(d) == 0.25:
            return 2.0 * x - 2.0 * x * x
    if preset.kind == "salem" and len(preset.args) == 2:
        a, d = preset.args
        if as_float(a) == as_float(d):
            return float(x)
    return None


def describe_presets() -> list[str]:
    return [f"{sig:<42} {desc}" for _, sig, desc in _BUILDERS.values()]
