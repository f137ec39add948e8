"""Quadratically mapped radial grid, 7-point stencils and quadrature.

The radial coordinate is rho = rho_N t^2 with t uniform on (0, 1].  Unknowns
live on t_j = j/N, j = 1..N.  The reduced radial function behaves like
sqrt(rho), i.e. linearly in t, so it extends to an odd function of t across
the origin.  Stencil entries that reach t < 0 are folded back with a sign
flip, the node t = 0 carries psi = 0 and nodes beyond t = 1 carry psi = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import bernoulli

OFFSETS = np.arange(-3, 4)
HALF_WIDTH = 3


def fornberg_weights(z: float, x, m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at ``z`` from nodes ``x``.

    Returns ``c`` with ``c[k, j]`` the weight of node ``x[j]`` in the k-th
    derivative.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def gregory_corrections(order: int) -> np.ndarray:
    """End corrections to the unit-step trapezoid rule.

    Solves sum_i d_i i^p = B_{p+1}/(p+1) (odd p) and 0 (even p) for
    p < order, which cancels the Euler-Maclaurin end terms.
    """
    bern = bernoulli(order + 1)
    a = np.vander(np.arange(order, dtype=float), order, increasing=True).T
    rhs = np.array([bern[p + 1] / (p + 1) if p % 2 == 1 else 0.0 for p in range(order)])
    return np.linalg.solve(a, rhs)


def gregory_weights(n_nodes: int, h: float, order: int = 6) -> np.ndarray:
    """Composite trapezoid with Gregory end corrections on a uniform grid.

    Grids too short for both end corrections fall back to closed Newton-Cotes.
    """
    if n_nodes < 2 * order:
        k = np.arange(n_nodes, dtype=float)
        span = n_nodes - 1
        moments = span ** (np.arange(n_nodes) + 1.0) / (np.arange(n_nodes) + 1.0)
        return h * np.linalg.solve(np.vander(k, n_nodes, increasing=True).T, moments)
    w = np.full(n_nodes, h)
    w[0] = w[-1] = 0.5 * h
    if order > 0:
        d = gregory_corrections(order) * h
        w[:order] += d
        w[n_nodes - order:] += d[::-1]
    return w


@dataclass(frozen=True, eq=False)
class RadialGrid:
    N: int
    rho_N: float
    t: np.ndarray
    rho: np.ndarray
    jac: np.ndarray
    quad: np.ndarray

    @property
    def h(self) -> float:
        return 1.0 / self.N

    def integrate(self, values: np.ndarray) -> complex | float:
        """Quadrature of samples at the nodes (value at rho = 0 taken as 0)."""
        return np.dot(self.quad, values)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return build_radial_grid(self.N * factor, self.rho_N)


def default_box_radius(B: float, n: int = 1) -> float:
    """Box radius scaled to the zero-field size of level n and the magnetic length."""
    size = 2 * n - 1
    return 40.0 * size / max(1.0, np.sqrt(B * size))


def build_radial_grid(N: int, rho_N: float) -> RadialGrid:
    if N < 4:
        raise ValueError(f"N must be >= 4, got {N}")
    if not rho_N > 0:
        raise ValueError(f"rho_N must be positive, got {rho_N}")
    h = 1.0 / N
    t = np.arange(1, N + 1) * h
    t[-1] = 1.0
    rho = rho_N * t * t
    jac = 2.0 * rho_N * t
    w = gregory_weights(N + 1, h)
    quad = w[1:] * jac
    for a in (t, rho, jac, quad):
        a.setflags(write=False)
    return RadialGrid(int(N), float(rho_N), t, rho, jac, quad)


@dataclass(frozen=True, eq=False)
class DerivativeStencils:
    """Per-node 7-point rows in t and the folded d^2/drho^2 band.

    ``nodes[i, k]`` is the raw t-node index (possibly <= 0 or > N) used by
    row ``i`` with weight ``d1_rows[i, k]`` / ``d2_rows[i, k]``.  ``d2_rho``
    holds the composed second derivative in rho after boundary elimination,
    as a band over interior unknowns: entry ``[i, k]`` couples unknown ``i``
    to unknown ``i + OFFSETS[k]``.
    """

    grid: RadialGrid
    nodes: np.ndarray
    d1_rows: np.ndarray
    d2_rows: np.ndarray
    d2_rho: np.ndarray

    def differentiate(self, f) -> tuple[np.ndarray, np.ndarray]:
        """Apply the raw rows to a callable of t sampled at the row nodes."""
        tt = self.nodes * self.grid.h
        vals = f(tt)
        return np.sum(self.d1_rows * vals, axis=1), np.sum(self.d2_rows * vals, axis=1)

    def second_derivative_rho(self, psi: np.ndarray) -> np.ndarray:
        """d^2 psi/drho^2 at the nodes for psi given on the N unknowns (axis 0)."""
        return band_apply(self.d2_rho, psi)


def band_apply(band: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Multiply a 7-diagonal band (N, 7) by ``x`` along axis 0."""
    N = band.shape[0]
    x = np.asarray(x)
    coef_shape = (N,) + (1,) * (x.ndim - 1)
    y = band[:, HALF_WIDTH].reshape(coef_shape) * x
    for k, o in enumerate(OFFSETS):
        if o == 0:
            continue
        if o > 0:
            y[:-o] += band[:-o, k].reshape((N - o,) + coef_shape[1:]) * x[o:]
        else:
            y[-o:] += band[-o:, k].reshape((N + o,) + coef_shape[1:]) * x[:o]
    return y


def central_weights(order: int, h: float) -> np.ndarray:
    c = fornberg_weights(0.0, OFFSETS.astype(float), 2)[order]
    return c / h**order


def derivative_stencils(grid: RadialGrid) -> DerivativeStencils:
    N, h = grid.N, grid.h
    w1 = central_weights(1, h)
    w2 = central_weights(2, h)
    idx = np.arange(1, N + 1)
    nodes = idx[:, None] + OFFSETS[None, :]
    d1_rows = np.tile(w1, (N, 1))
    d2_rows = np.tile(w2, (N, 1))

    # chain rule in t: d2/drho2 = D2/J^2 - J'/J^3 D1, with J' = 2 rho_N
    jac = grid.jac
    raw = d2_rows / jac[:, None] ** 2 - (2.0 * grid.rho_N / jac[:, None] ** 3) * d1_rows

    band = np.zeros((N, 7))
    for i in range(N):
        for k in range(7):
            j = nodes[i, k]
            sign = 1.0
            if j < 0:
                j, sign = -j, -1.0
            if j == 0 or j > N:
                continue
            band[i, j - (i + 1) + HALF_WIDTH] += sign * raw[i, k]
    for a in (nodes, d1_rows, d2_rows, band):
        a.setflags(write=False)
    return DerivativeStencils(grid, nodes, d1_rows, d2_rows, band)
