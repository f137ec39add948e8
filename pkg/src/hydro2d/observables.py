"""Normalization, expectation values, densities and potential surfaces.

A state is stored as reduced samples psi_j(rho_i) = sqrt(rho_i) Psi(rho_i, phi_j),
so |Psi|^2 rho drho dphi = |psi|^2 drho dphi and norms need no extra factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import AngularBasis
from .hamiltonian import quadratic_term
from .radial import RadialGrid

RHO_CLAMP = 1e-3


@dataclass(frozen=True, eq=False)
class Wavefunction:
    samples: np.ndarray  # (N, 2M+1) complex
    grid: RadialGrid
    basis: AngularBasis
    normalized: bool = False

    def __post_init__(self):
        if self.samples.shape != (self.grid.N, self.basis.n_ang):
            raise ValueError(f"samples shape {self.samples.shape} does not match grids "
                             f"({self.grid.N}, {self.basis.n_ang})")

    @property
    def vector(self) -> np.ndarray:
        return self.samples.reshape(-1)

    def weights(self) -> np.ndarray:
        """(N, 1) quadrature weight including the angular factor."""
        return (self.grid.quad * self.basis.weight)[:, None]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights() * np.abs(self.samples) ** 2)))

    def physical(self) -> np.ndarray:
        """Psi(rho_i, phi_j) = psi_j(rho_i)/sqrt(rho_i)."""
        return self.samples / np.sqrt(self.grid.rho)[:, None]


def _check_pair(a: Wavefunction, b: Wavefunction):
    if a.grid.N != b.grid.N or a.grid.rho_N != b.grid.rho_N or a.basis.M != b.basis.M:
        raise ValueError("states live on different grids")


def normalize(psi: Wavefunction) -> Wavefunction:
    """Unit norm, with the largest-magnitude sample made real and positive."""
    nrm = psi.norm()
    if not nrm > 0:
        raise ValueError("cannot normalize a zero state")
    s = psi.samples / nrm
    k = int(np.argmax(np.abs(s)))
    pivot = s.flat[k]
    s = s * (abs(pivot) / pivot)
    s.flat[k] = abs(pivot)
    return Wavefunction(s, psi.grid, psi.basis, normalized=True)


def lz_expectation(psi: Wavefunction) -> float:
    w = psi.weights()
    val = np.sum(w * np.conj(psi.samples) * (psi.samples @ psi.basis.h1.T))
    val /= np.sum(w * np.abs(psi.samples) ** 2)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"<L_z> has imaginary part {val.imag:.3e}")
    return float(val.real)


def matrix_element(a: Wavefunction, b: Wavefunction, f_rho_phi) -> complex:
    """<b| f(rho, phi) |a> under the grid quadrature (no band-limit correction)."""
    _check_pair(a, b)
    f = f_rho_phi(a.grid.rho[:, None], a.basis.phi[None, :])
    return complex(np.sum(a.weights() * f * np.conj(b.samples) * a.samples))


def harmonic_element(a: Wavefunction, b: Wavefunction, k: int, radial) -> complex:
    """<b| f(rho) e^{ik phi} |a> computed exactly in the Fourier representation.

    Multiplying by e^{ik phi} maps basis function m to (-1)^k times basis
    function m + k, so no angular aliasing enters.
    """
    _check_pair(a, b)
    ca = a.basis.to_fourier(a.samples)
    cb = b.basis.to_fourier(b.samples)
    n = ca.shape[1]
    if abs(k) >= n:
        return 0j
    if k >= 0:
        overlap = np.sum(np.conj(cb[:, k:]) * ca[:, :n - k], axis=1)
    else:
        overlap = np.sum(np.conj(cb[:, :n + k]) * ca[:, -k:], axis=1)
    return complex((-1) ** k * np.dot(a.grid.quad * radial(a.grid.rho), overlap))


def dipole_element(a: Wavefunction, b: Wavefunction) -> float:
    """Dipole strength sqrt(2(|x_ba|^2 + |y_ba|^2)).

    For an s state and either member of the l = +-1 doublet this is the
    radial integral int R_b R_a rho^2 drho, independent of the orientation
    chosen inside the doublet.
    """
    up = harmonic_element(a, b, 1, lambda r: r)
    down = harmonic_element(a, b, -1, lambda r: r)
    x = 0.5 * (up + down)
    y = (up - down) / 2j
    return float(np.sqrt(2.0 * (abs(x) ** 2 + abs(y) ** 2)))


def second_moments(psi: Wavefunction) -> tuple[float, float]:
    """(<x^2>, <y^2>) with exact angular integration."""
    r2 = lambda r: r * r
    total = harmonic_element(psi, psi, 0, r2).real
    cross = harmonic_element(psi, psi, 2, r2).real
    norm = psi.norm() ** 2
    return float((0.5 * total + 0.5 * cross) / norm), float((0.5 * total - 0.5 * cross) / norm)


def _lagrange_in_t(grid: RadialGrid, values: np.ndarray, tq: np.ndarray, width: int = 6) -> np.ndarray:
    """6-point interpolation in t of an even function given at t_1..t_N.

    Values are mirrored to negative t and taken as 0 beyond t = 1.
    """
    N, h = grid.N, grid.h
    pad = width
    idx = np.concatenate([-np.arange(pad, 0, -1), np.arange(1, N + 1 + pad)])
    nodes = idx * h
    src = np.concatenate([values[pad - 1::-1], values, np.zeros((pad,) + values.shape[1:], values.dtype)])
    # position of the first node of each 6-point window
    pos = np.searchsorted(nodes, tq) - width // 2
    pos = np.clip(pos, 0, len(nodes) - width)
    out = np.zeros((len(tq),) + values.shape[1:], dtype=complex)
    for a in range(width):
        la = np.ones(len(tq))
        for b in range(width):
            if b != a:
                la *= (tq - nodes[pos + b]) / (nodes[pos + a] - nodes[pos + b])
        out += la.reshape((-1,) + (1,) * (values.ndim - 1)) * src[pos + a]
    return out


def evaluate(psi: Wavefunction, x, y) -> np.ndarray:
    """Psi at Cartesian points; zero outside the box."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    x, y = np.broadcast_arrays(x, y)
    rho = np.hypot(x, y).ravel()
    phi = np.mod(np.arctan2(y, x), 2 * np.pi).ravel()
    g = psi.grid
    # psi/t is even and smooth in t; interpolate its Fourier coefficients
    coeffs = psi.basis.to_fourier(psi.samples) / g.t[:, None]
    inside = rho <= g.rho_N
    tq = np.sqrt(rho[inside] / g.rho_N)
    c = _lagrange_in_t(g, coeffs, tq)
    out = np.zeros(rho.shape, dtype=complex)
    out[inside] = psi.basis.evaluate(c, phi[inside]) / np.sqrt(g.rho_N)
    return out.reshape(shape)


def cartesian_axes(half_extent: float, resolution: int) -> np.ndarray:
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if not half_extent > 0:
        raise ValueError("half_extent must be positive")
    return np.linspace(-half_extent, half_extent, resolution)


def density_cartesian(psi: Wavefunction, half_extent: float, resolution: int):
    """|Psi(x, y)|^2 on a square grid; returns (axis, field[y, x])."""
    ax = cartesian_axes(half_extent, resolution)
    X, Y = np.meshgrid(ax, ax)
    return ax, np.abs(evaluate(psi, X, Y)) ** 2


def potential_surface(B: float, alpha: float, half_extent: float, resolution: int):
    """-1/rho plus the diamagnetic term on a square grid, rho clamped at 1e-3."""
    ax = cartesian_axes(half_extent, resolution)
    X, Y = np.meshgrid(ax, ax)
    rho = np.maximum(np.hypot(X, Y), RHO_CLAMP)
    phi = np.arctan2(Y, X)
    return ax, -1.0 / rho + quadratic_term(B, alpha, rho, phi)
