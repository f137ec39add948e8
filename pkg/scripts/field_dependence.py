"""Ground-state energy versus field magnitude for several tilts, with both asymptotes.

Writes CSV through the command-line scan so the file format matches `hydro2d scan`.
The automatic convergence ladder is reliable up to a few atomic units at large
tilt; stronger tilted fields need an explicit angular size (see
strong_field_anisotropy.py).
"""

import argparse

import numpy as np

from hydro2d import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="field_dependence.csv")
    ap.add_argument("--angles", default="0,30,45,60,90")
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    fields = ",".join(f"{b:.6g}" for b in np.geomspace(0.05, 8.0, 12))
    argv = ["scan", "--B", fields, "--alpha", args.angles, "--out", args.out]
    if args.jobs:
        argv += ["--jobs", str(args.jobs)]
    raise SystemExit(cli.main(argv))


if __name__ == "__main__":
    main()
