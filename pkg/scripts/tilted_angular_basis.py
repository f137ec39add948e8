"""Tilted-field ground states against the published infinite- and finite-mass values.

For every benchmark row this prints the converged energy in both mass modes
next to a fixed small-basis run (M = 2, N = 3200, rho_N = 40), which is the
resolution that reproduces the infinite-mass column.
"""

from hydro2d.eigensolver import GroundState, SolverOptions, converge, solve_target
from hydro2d.params import FiniteProton, InfiniteProton, PhysicalConfig
from hydro2d.reference import TILTED_GROUND


def main():
    print("B     alpha  published_inf   converged_inf   M=2_inf         published_fin   converged_fin")
    small = SolverOptions(N=3200, M=2, rho_N=40.0)
    for row in TILTED_GROUND:
        inf = PhysicalConfig.from_degrees(row.B, row.alpha_degrees, InfiniteProton())
        fin = PhysicalConfig.from_degrees(row.B, row.alpha_degrees, FiniteProton())
        conv_inf = converge(inf, GroundState(), 1e-7).energy
        conv_fin = converge(fin, GroundState(), 1e-7).energy
        m2 = solve_target(inf, GroundState(), small, shift=conv_inf - 0.05).energy
        print(f"{row.B:<5g} {row.alpha_degrees:5g}  {row.energy_infinite:+.8f}  {conv_inf:+.8f}  {m2:+.8f}  "
              f"{row.energy_finite:+.8f}  {conv_fin:+.8f}")


if __name__ == "__main__":
    main()
