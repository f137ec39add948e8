"""Ground state at B = 1e3 versus tilt: energy, angular-resolution change and <x^2>/<y^2>.

The default convergence ladder is too coarse in M here; the run uses an
explicit grid (N = 400, rho_N = 1.5) at M = 48 and M = 64.
"""

import argparse

from hydro2d.eigensolver import GroundState, SolverOptions, converge, solve_target
from hydro2d.observables import second_moments
from hydro2d.params import PhysicalConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--B", type=float, default=1e3)
    ap.add_argument("--angles", default="0,30,45,60,80,90")
    ap.add_argument("--N", type=int, default=400)
    ap.add_argument("--rhoN", type=float, default=1.5)
    args = ap.parse_args()

    print("alpha_deg  E(M=64)          E(M=48)-E(M=64)  <x2>/<y2>")
    e0 = None
    for a in (float(v) for v in args.angles.split(",")):
        cfg = PhysicalConfig.from_degrees(args.B, a)
        if a == 0.0:
            res = converge(cfg, GroundState(), 1e-7)
            fine, delta = res, res.ladder[-1] - res.ladder[-2]
        else:
            fine = solve_target(cfg, GroundState(), SolverOptions(N=args.N, M=64, rho_N=args.rhoN))
            coarse = solve_target(cfg, GroundState(), SolverOptions(N=args.N, M=48, rho_N=args.rhoN),
                                  shift=fine.energy - 1e-7 * abs(fine.energy))
            delta = coarse.energy - fine.energy
        x2, y2 = second_moments(fine.state)
        e0 = fine.energy if e0 is None else e0
        print(f"{a:9.1f}  {fine.energy:15.8f}  {delta:+.2e}        {x2 / y2:8.3f}")
    print(f"E(first)/E(last) = {e0 / fine.energy:.4f}")


if __name__ == "__main__":
    main()
