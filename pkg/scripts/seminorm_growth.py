"""Seminorm lower bounds against word length, near and at the critical exponent.

Prints seminorm_lower(alpha, L) for L = 1..max_level and a few alpha values,
plus the geometric upper bound where it is finite.

    python3 scripts/seminorm_growth.py --preset cantor --offsets 0 0.05 0.2
"""

import argparse
import math
from dataclasses import dataclass, field

from selfsim.holder import analytic_exponent, seminorm_profile, seminorm_upper_bound
from selfsim.presets import make


@dataclass(frozen=True)
class GrowthConfig:
    preset: str = "cantor"
    max_level: int = 12
    offsets: tuple[float, ...] = field(default=(0.0, 0.05, 0.2))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default=GrowthConfig.preset)
    ap.add_argument("--max-level", type=int, default=GrowthConfig.max_level)
    ap.add_argument("--offsets", type=float, nargs="+", default=list(GrowthConfig().offsets))
    args = ap.parse_args()
    cfg = GrowthConfig(args.preset, args.max_level, tuple(args.offsets))

    p = make(cfg.preset)
    base = analytic_exponent(p).exponent
    print(f"{cfg.preset}: exponent {base:.12f}")
    for off in cfg.offsets:
        alpha = min(base + off, 1.0)
        prof = seminorm_profile(p, alpha, cfg.max_level)
        upper = seminorm_upper_bound(p, alpha)
        tail = "inf" if math.isinf(upper) else f"{upper:.6g}"
        print(f"alpha={alpha:.6f} upper={tail}")
        print("  " + " ".join(f"{v:.6g}" for v in prof[1:]))


if __name__ == "__main__":
    main()
