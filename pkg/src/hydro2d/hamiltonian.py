"""Banded-block discrete Hamiltonian.

Acting on the reduced functions psi_j(rho) = sqrt(rho) Psi(rho, phi_j):

    H = 1/(2 m_r) [ -d2/drho2 - 1/(4 rho^2) + V - h0/rho^2 ]
    V = -2 m_r/rho + (mu_p - mu_e) B cos(alpha) h1 + (B^2 rho^2/4)(1 - sin^2 alpha cos^2 phi)

State vectors are stored node-major: entry ``i * n_ang + j`` is psi_j(rho_i).
The radial coupling is a scalar times the identity for every angular channel,
so only the diagonal blocks are dense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .angular import AngularBasis
from .params import PhysicalConfig
from .radial import HALF_WIDTH, OFFSETS, DerivativeStencils, RadialGrid, band_apply, derivative_stencils


def quadratic_term(B: float, alpha: float, rho, phi):
    """Diamagnetic potential (1/4) B^2 rho^2 (1 - sin^2 alpha cos^2 phi)."""
    s2 = 1.0 if alpha == np.pi / 2 else np.sin(alpha) ** 2
    return 0.25 * B * B * np.asarray(rho) ** 2 * (1.0 - s2 * np.cos(phi) ** 2)


def zeeman_coefficient(config: PhysicalConfig) -> float:
    """Prefactor of L_z in the potential, (mu_p - mu_e) B cos(alpha)."""
    return (config.mu_p - config.mu_e) * config.B * config.cos_alpha


def potential_block(config: PhysicalConfig, basis: AngularBasis, rho_i: float) -> np.ndarray:
    """Potential matrix V_jj' at radius ``rho_i`` (before the 1/(2 m_r) factor)."""
    if not rho_i > 0:
        raise ValueError(f"potential needs rho > 0, got {rho_i}")
    n = basis.n_ang
    v = zeeman_coefficient(config) * basis.h1.astype(complex)
    diag = -2.0 * config.m_r / rho_i + quadratic_term(config.B, config.alpha, rho_i, basis.phi)
    v[np.diag_indices(n)] += diag
    return v


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """Operator on (N, n_ang) samples.

    ``band`` holds the radial kinetic coupling (N, 7) shared by all channels.
    ``local`` holds the dense (n_ang, n_ang) potential part at each node and
    ``centrifugal`` the factor -1/(2 m_r rho^2) multiplying h0.  The angular
    Laplacian is applied through the Fourier transform: near the origin h0/rho^2
    has entries of order 1e13 and a dense product would cancel them in floating
    point.  With ``channel`` set, the operator is the single Fourier sector
    l = channel, ``basis`` and ``centrifugal`` are None and ``local`` is 1x1.
    """

    config: PhysicalConfig
    grid: RadialGrid
    basis: AngularBasis | None
    band: np.ndarray
    local: np.ndarray
    centrifugal: np.ndarray | None = None
    channel: int | None = None

    @property
    def N(self) -> int:
        return self.grid.N

    @property
    def n_ang(self) -> int:
        return self.local.shape[1]

    @property
    def dim(self) -> int:
        return self.N * self.n_ang

    @property
    def angular_weight(self) -> float:
        return 2.0 * np.pi / self.n_ang if self.basis is not None else 1.0

    @property
    def blocks(self) -> np.ndarray:
        """Dense diagonal blocks without the radial centre term."""
        if self.centrifugal is None:
            return self.local
        return self.local + self.centrifugal[:, None, None] * self.basis.h0

    def weights(self) -> np.ndarray:
        """Quadrature weights for the flattened state vector."""
        return np.repeat(self.grid.quad * self.angular_weight, self.n_ang)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got shape {x.shape}")
        X = x.reshape(self.N, self.n_ang)
        Y = band_apply(self.band, X.astype(complex))
        Y += np.einsum("ijk,ik->ij", self.local, X)
        if self.centrifugal is not None:
            b = self.basis
            laplacian = (b.to_fourier(X) * -(b.m.astype(float) ** 2)) @ b.xi.T
            Y += self.centrifugal[:, None] * laplacian
        return Y.reshape(-1)

    def to_sparse(self) -> sp.csr_matrix:
        n, N = self.n_ang, self.N
        offs = [int(o) for o in OFFSETS]
        diags = [self.band[max(0, -o):N - max(0, o), k] for k, o in enumerate(offs)]
        radial = sp.diags(diags, offs, shape=(N, N), format="csr")
        local = sp.block_diag(list(self.blocks), format="csr")
        return (sp.kron(radial, sp.identity(n), format="csr") + local).tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def shifted_diagonal_blocks(self, sigma: float) -> np.ndarray:
        """Dense diagonal blocks of H - sigma I, including the radial centre."""
        out = np.array(self.blocks, dtype=complex)
        idx = np.arange(self.n_ang)
        out[:, idx, idx] += (self.band[:, HALF_WIDTH] - sigma)[:, None]
        return out


def _radial_band(config: PhysicalConfig, stencils: DerivativeStencils) -> np.ndarray:
    band = -np.array(stencils.d2_rho) / (2.0 * config.m_r)
    band.setflags(write=False)
    return band


def assemble(config: PhysicalConfig, grid: RadialGrid, basis: AngularBasis,
             stencils: DerivativeStencils | None = None) -> DiscreteHamiltonian:
    if stencils is None:
        stencils = derivative_stencils(grid)
    elif stencils.grid.N != grid.N or stencils.d2_rho.shape[0] != grid.N:
        raise ValueError("stencils were built for a different grid")
    scale = 1.0 / (2.0 * config.m_r)
    n = basis.n_ang
    rho = grid.rho
    local = np.empty((grid.N, n, n), dtype=complex)
    eye = np.eye(n)
    for i, r in enumerate(rho):
        local[i] = potential_block(config, basis, r) - eye / (4.0 * r * r)
    local *= scale
    centrifugal = -scale / rho**2
    for a in (local, centrifugal):
        a.setflags(write=False)
    return DiscreteHamiltonian(config, grid, basis, _radial_band(config, stencils), local, centrifugal)


def assemble_channel(config: PhysicalConfig, grid: RadialGrid, l: int,
                     stencils: DerivativeStencils | None = None) -> DiscreteHamiltonian:
    """Single-sector operator for Fourier index ``l`` (needs sharp L_z)."""
    if not config.lz_is_sharp:
        raise ValueError("a single angular channel is exact only at B = 0 or alpha = 0")
    if stencils is None:
        stencils = derivative_stencils(grid)
    rho = grid.rho
    local = ((l * l - 0.25) / rho**2 - 2.0 * config.m_r / rho + zeeman_coefficient(config) * l
             + quadratic_term(config.B, config.alpha, rho, 0.0))
    blocks = (local / (2.0 * config.m_r)).astype(complex).reshape(-1, 1, 1)
    blocks.setflags(write=False)
    return DiscreteHamiltonian(config, grid, None, _radial_band(config, stencils), blocks, channel=l)


def hermiticity_defect(H: DiscreteHamiltonian, rng: np.random.Generator, pairs: int = 100) -> float:
    """Largest |<u,Hv> - conj(<v,Hu>)| / (|u||v|) over random complex pairs."""
    worst = 0.0
    for _ in range(pairs):
        u = rng.standard_normal(H.dim) + 1j * rng.standard_normal(H.dim)
        v = rng.standard_normal(H.dim) + 1j * rng.standard_normal(H.dim)
        d = abs(np.vdot(u, H.apply(v)) - np.conj(np.vdot(v, H.apply(u))))
        worst = max(worst, d / (np.linalg.norm(u) * np.linalg.norm(v)))
    return worst
