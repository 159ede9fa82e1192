"""Render SVG graphs of the four example families into a directory.

    python3 scripts/make_figures.py --out figures
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from selfsim.plot import PlotSpec, plot_params
from selfsim.presets import make, reference_value

FIGURES = {
    "takagi_4_quarter": "takagi(4,1/4)",
    "cantor": "cantor",
    "salem_general": "salem_general(3,[1/5,1/2,3/10],[3/10,1/5,1/2])",
    "kiesswetter": "kiesswetter",
    "takagi_2_quarter": "takagi(2,1/4)",
}


@dataclass(frozen=True)
class FigureConfig:
    out: Path = Path("figures")
    width: int = 800
    height: int = 600
    level: int | None = None


def render_all(cfg: FigureConfig) -> list[Path]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, expr in FIGURES.items():
        has_ref = reference_value(expr, 0.0) is not None
        spec = PlotSpec(width=cfg.width, height=cfg.height, level=cfg.level, overlay=has_ref)
        ref = (lambda x, e=expr: reference_value(e, x)) if has_ref else None
        path = cfg.out / f"{stem}.svg"
        path.write_text(plot_params(make(expr), spec, ref), encoding="utf-8")
        written.append(path)
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=FigureConfig.out)
    ap.add_argument("--width", type=int, default=FigureConfig.width)
    ap.add_argument("--height", type=int, default=FigureConfig.height)
    ap.add_argument("--level", type=int)
    args = ap.parse_args()
    for path in render_all(FigureConfig(args.out, args.width, args.height, args.level)):
        print(path)


if __name__ == "__main__":
    main()
