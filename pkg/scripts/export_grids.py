"""Density and potential grids for a set of tilts, written as plain-text grid files."""

import argparse
from pathlib import Path

from hydro2d import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="grids")
    ap.add_argument("--B", type=float, default=1.0)
    ap.add_argument("--angles", default="0,45,90")
    ap.add_argument("--resolution", type=int, default=101)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for a in args.angles.split(","):
        common = ["--B", str(args.B), "--alpha", a, "--resolution", str(args.resolution)]
        status |= cli.main(["export", "density", *common, "--out", str(out / f"density_B{args.B:g}_a{a}.txt")])
        status |= cli.main(["export", "potential", *common, "--extent", "3",
                            "--out", str(out / f"potential_B{args.B:g}_a{a}.txt")])
    raise SystemExit(status)


if __name__ == "__main__":
    main()
