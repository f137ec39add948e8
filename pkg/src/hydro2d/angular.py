"""Fourier discrete-variable representation in the polar angle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class AngularBasis:
    """Uniform angular grid with 2M+1 points and its grid-space operators.

    ``xi[j, k]`` is the Fourier function with index ``m = k - M`` sampled at
    ``phi[j]``; ``h0`` is the angular Laplacian and ``h1`` is L_z.
    """

    M: int
    phi: np.ndarray
    m: np.ndarray
    xi: np.ndarray
    xi_inv: np.ndarray
    h0: np.ndarray
    h1: np.ndarray

    @property
    def n_ang(self) -> int:
        return 2 * self.M + 1

    @property
    def weight(self) -> float:
        """Angular quadrature weight 2 pi/(2M+1)."""
        return 2.0 * np.pi / self.n_ang

    def channel_projector(self, l: int) -> np.ndarray:
        """Grid-space projector onto Fourier index ``l``."""
        k = l + self.M
        if not 0 <= k < self.n_ang:
            raise ValueError(f"channel {l} outside |m| <= {self.M}")
        return np.outer(self.xi[:, k], self.xi_inv[k, :])

    def to_fourier(self, samples: np.ndarray) -> np.ndarray:
        """Fourier coefficients from grid samples along the last axis."""
        return samples @ self.xi_inv.T

    def evaluate(self, coeffs: np.ndarray, phi) -> np.ndarray:
        """Trigonometric interpolation of coefficients at arbitrary angles."""
        phi = np.asarray(phi, dtype=float)
        basis = np.exp(1j * np.multiply.outer(phi - np.pi, self.m)) / np.sqrt(2 * np.pi)
        return np.sum(basis * coeffs, axis=-1)


def _circulant(col: np.ndarray) -> np.ndarray:
    """Matrix with entry (j, j') = col[(j - j') mod n]."""
    n = len(col)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return col[idx]


def _first_column(basis: AngularBasis, power: int) -> np.ndarray:
    """sum_m m^power xi_jm xi^-1_m0, symmetrized so the circulant is Hermitian."""
    col = (basis.xi * basis.m.astype(float) ** power) @ basis.xi_inv[:, 0]
    n = len(col)
    k = np.arange(1, n)
    col[k] = 0.5 * (col[k] + np.conj(col[n - k]))
    col[0] = col[0].real
    return col


def h0_matrix(basis: AngularBasis) -> np.ndarray:
    """Angular Laplacian -sum_m m^2 xi_jm xi^-1_mj' (real symmetric)."""
    return np.ascontiguousarray(_circulant(-_first_column(basis, 2).real))


def h1_matrix(basis: AngularBasis) -> np.ndarray:
    """L_z on the grid, sum_m m xi_jm xi^-1_mj' (Hermitian, zero diagonal)."""
    col = _first_column(basis, 1)
    col.real = 0.0  # purely imaginary: odd sum of sines
    return _circulant(col)


def build_basis(M: int) -> AngularBasis:
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    n = 2 * M + 1
    phi = 2.0 * np.pi * np.arange(n) / n
    m = np.arange(-M, M + 1)
    arg = np.outer(phi - np.pi, m)
    xi = np.exp(1j * arg) / np.sqrt(2.0 * np.pi)
    xi_inv = (np.sqrt(2.0 * np.pi) / n) * np.exp(-1j * arg.T)
    partial = AngularBasis(M, phi, m, xi, xi_inv, np.zeros((n, n)), np.zeros((n, n), complex))
    h0 = h0_matrix(partial)
    h1 = h1_matrix(partial)
    for a in (phi, m, xi, xi_inv, h0, h1):
        a.setflags(write=False)
    return AngularBasis(M, phi, m, xi, xi_inv, h0, h1)
