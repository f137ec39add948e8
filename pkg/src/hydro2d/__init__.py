"""Planar hydrogen atom in a tilted magnetic field.

Fourier DVR in the polar angle, a quadratically mapped radial grid with
6th-order finite differences, and shifted inverse iteration with a
block-tridiagonal sweep solver.
"""

from .angular import AngularBasis, build_basis, h0_matrix, h1_matrix
from .eigensolver import (ClassificationError, ConvergenceError, Factorization, GroundState, Level,
                          NearEnergy, ShiftHitsEigenvalue, SolverOptions, SolveResult, converge, factorize,
                          inverse_iteration, solve_target)
from .hamiltonian import DiscreteHamiltonian, assemble, potential_block, quadratic_term
from .observables import (Wavefunction, density_cartesian, dipole_element, lz_expectation, normalize,
                          potential_surface, second_moments)
from .params import FiniteProton, InfiniteProton, PhysicalConfig, reduced_masses
from .radial import DerivativeStencils, RadialGrid, build_radial_grid, derivative_stencils
from .reference import analytic_dipole_oracle, analytic_energy, strong_field_energy, weak_field_energy

__all__ = [name for name in dir() if not name.startswith("_")]
