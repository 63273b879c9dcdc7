"""Write the classification map and the two attractor panels (4, 6) and (4, 5).

    python scripts/render_figures.py --out figures/ --depth 9 --size 512
"""

import argparse
from pathlib import Path

from jumptile.classify import classify_search
from jumptile.params import validate_params
from jumptile.render import render_attractor, render_parameter_map


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figures")
    parser.add_argument("--depth", type=int, default=9)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--cell", type=int, default=12)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    render_parameter_map((-10, 10), (-10, 10), 0, args.cell).save(out / "parameter_map_m0.ppm")
    print("wrote", out / "parameter_map_m0.ppm")
    for p, q in [(4, 6), (4, 5)]:
        params = validate_params(p, q, 0)
        path = out / f"attractor_p{p}_q{q}.ppm"
        render_attractor(params, args.depth, args.size, args.size).save(path)
        print("wrote", path, "-", classify_search(params).verdict.value)


if __name__ == "__main__":
    main()
