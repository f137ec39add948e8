"""Shifted inverse iteration with a block-tridiagonal sweep solver.

Radial nodes are grouped into super-blocks of at least three nodes, which
turns the 7-point radial band into a block-tridiagonal matrix.  Each dense
super-block is factored with partial pivoting; the couplings between
neighbouring super-blocks are small scalar matrices times the identity on
the angular channels.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .angular import build_basis
from .hamiltonian import DiscreteHamiltonian, assemble, assemble_channel
from .observables import Wavefunction, lz_expectation, normalize
from .params import PhysicalConfig
from .reference import tilted_ground_estimate
from .radial import HALF_WIDTH, OFFSETS, build_radial_grid, default_box_radius, derivative_stencils

COLLAPSE_GAP = 1e-10
SHIFT_NUDGE = 1e-6
RESIDUAL_TOL = 1e-8
# accepted when the residual has stalled at the roundoff floor of a fine grid
RESIDUAL_FLOOR = 1e-6
STALL_FACTOR = 0.5
DEFAULT_SEED = 20240611


class ShiftHitsEigenvalue(ArithmeticError):
    """The shift coincides with an eigenvalue to working precision."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, history=()):
        super().__init__(message)
        self.history = tuple(history)


class ClassificationError(RuntimeError):
    def __init__(self, message: str, lz: float):
        super().__init__(message)
        self.lz = lz


def default_super_block(n_ang: int) -> int:
    """Nodes per super-block: 3 for wide blocks, more when blocks are narrow."""
    return max(HALF_WIDTH, -(-48 // n_ang))


class Factorization:
    """Block LU of H - sigma I over super-blocks of ``size`` radial nodes."""

    def __init__(self, H: DiscreteHamiltonian, sigma: float, size: int | None = None):
        n = H.n_ang
        size = default_super_block(n) if size is None else size
        if size < HALF_WIDTH:
            raise ValueError(f"super-blocks need at least {HALF_WIDTH} nodes")
        self.H = H
        self.sigma = float(sigma)
        self.n = n
        N = H.N
        self.starts = list(range(0, N, size))
        self.stops = self.starts[1:] + [N]
        diag = H.shifted_diagonal_blocks(self.sigma)
        band = H.band
        self.upper = []  # node couplings super k -> super k+1
        self.lower = []  # node couplings super k+1 -> super k
        for k in range(len(self.starts) - 1):
            a, b, c = self.starts[k], self.stops[k], self.stops[k + 1]
            self.upper.append(_coupling(band, a, b, b, c))
            self.lower.append(_coupling(band, b, c, a, b))
        self.lu = []
        prev = None
        for k, (a, b) in enumerate(zip(self.starts, self.stops)):
            D = _dense_super_block(diag, band, a, b)
            if prev is not None:
                Bk = np.kron(self.upper[k - 1], np.eye(n))
                G = sla.lu_solve(prev, Bk)
                D -= _kron_apply(self.lower[k - 1], G, n)
            lu, piv = sla.lu_factor(D, check_finite=False)
            d = np.abs(np.diag(lu))
            if not np.all(np.isfinite(d)) or d.min() <= np.finfo(float).eps * d.max() * 1e-2:
                raise ShiftHitsEigenvalue(f"pivot collapse at sigma={self.sigma!r}")
            prev = (lu, piv)
            self.lu.append(prev)
        self._check_gap()

    def _check_gap(self):
        """Estimate |lambda - sigma| from two solves; reject if it is negligible."""
        rng = np.random.default_rng(7)
        w = np.sqrt(self.H.weights())
        x = rng.standard_normal(self.H.dim) + 1j * rng.standard_normal(self.H.dim)
        for _ in range(2):
            x = x / np.linalg.norm(w * x)
            x = self._solve(x)
        growth = np.linalg.norm(w * x)
        if not np.isfinite(growth) or growth * COLLAPSE_GAP * max(1.0, abs(self.sigma)) > 1.0:
            raise ShiftHitsEigenvalue(f"shift {self.sigma!r} is within {1 / growth:.2e} of an eigenvalue")

    def _solve(self, rhs: np.ndarray) -> np.ndarray:
        n = self.n
        R = np.asarray(rhs, dtype=complex).reshape(self.H.N, n)
        z = []
        for k, (a, b) in enumerate(zip(self.starts, self.stops)):
            r = R[a:b].reshape(-1)
            if k:
                r = r - _kron_apply(self.lower[k - 1], z[-1], n)
            z.append(sla.lu_solve(self.lu[k], r, check_finite=False))
        x = [None] * len(z)
        x[-1] = z[-1]
        for k in range(len(z) - 2, -1, -1):
            x[k] = z[k] - sla.lu_solve(self.lu[k], _kron_apply(self.upper[k], x[k + 1], n), check_finite=False)
        return np.concatenate(x)

    def residual(self, x: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.H.apply(x) - self.sigma * x - b

    def solve(self, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Solve (H - sigma) x = b, with one refinement step if needed."""
        x = self._solve(b)
        r = self.residual(x, b)
        if np.linalg.norm(r) > tol * np.linalg.norm(b):
            x = x - self._solve(r)
        return x


def _coupling(band, r0, r1, c0, c1) -> np.ndarray:
    """Scalar node coupling between node rows [r0, r1) and columns [c0, c1)."""
    out = np.zeros((r1 - r0, c1 - c0))
    for i in range(r0, r1):
        for k, o in enumerate(OFFSETS):
            j = i + o
            if c0 <= j < c1:
                out[i - r0, j - c0] = band[i, k]
    return out


def _dense_super_block(diag, band, a, b) -> np.ndarray:
    n = diag.shape[1]
    L = b - a
    D = np.zeros((L * n, L * n), dtype=complex)
    for i in range(L):
        D[i * n:(i + 1) * n, i * n:(i + 1) * n] = diag[a + i]
    inner = _coupling(band, a, b, a, b)
    np.fill_diagonal(inner, 0.0)
    D += np.kron(inner, np.eye(n))
    return D


def _kron_apply(c: np.ndarray, X: np.ndarray, n: int) -> np.ndarray:
    """(c kron I_n) @ X without forming the Kronecker product."""
    rows, cols = c.shape
    Xr = X.reshape((cols, n) + X.shape[1:])
    return np.tensordot(c, Xr, axes=(1, 0)).reshape((rows * n,) + X.shape[1:])


def factorize(H: DiscreteHamiltonian, sigma: float, size: int | None = None) -> Factorization:
    return Factorization(H, sigma, size)


def factorize_nudged(H: DiscreteHamiltonian, sigma: float, size: int | None = None, attempts: int = 4):
    """Factorize, moving the shift by 1e-6 max(1, |sigma|) after each collapse."""
    for _ in range(attempts):
        try:
            return Factorization(H, sigma, size)
        except ShiftHitsEigenvalue:
            sigma = sigma + SHIFT_NUDGE * max(1.0, abs(sigma))
    raise ShiftHitsEigenvalue(f"could not move shift off the spectrum near {sigma!r}")


# iteration

@dataclass(frozen=True)
class IterationOptions:
    tol: float = 1e-10
    max_iter: int = 200
    rayleigh_after: int | None = None
    seed: int = DEFAULT_SEED
    channel: int | None = None
    super_block: int | None = None


@dataclass(frozen=True, eq=False)
class SolveResult:
    energy: float
    state: Wavefunction
    residual: float
    iterations: int
    history: tuple
    N: int
    rho_N: float
    M: int
    sigma: float
    lz: float | None = None
    ladder: tuple = ()


def start_vector(H: DiscreteHamiltonian, seed: int, channel: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((H.N, H.n_ang)) + 1j * rng.standard_normal((H.N, H.n_ang))
    if channel is not None and H.basis is not None:
        x = x @ H.basis.channel_projector(channel).T
    return x.reshape(-1)


def _project(H: DiscreteHamiltonian, x: np.ndarray, P: np.ndarray | None) -> np.ndarray:
    if P is None:
        return x
    return (x.reshape(H.N, H.n_ang) @ P.T).reshape(-1)


def inverse_iteration(H: DiscreteHamiltonian, sigma: float, opts: IterationOptions | None = None,
                      start: np.ndarray | None = None):
    """Return (energy, vector, residual, iterations, history, sigma used)."""
    opts = opts or IterationOptions()
    fac = factorize_nudged(H, sigma, opts.super_block)
    w = H.weights()
    P = None
    if opts.channel is not None and H.basis is not None:
        P = H.basis.channel_projector(opts.channel)
    x = start_vector(H, opts.seed, opts.channel) if start is None else np.asarray(start, complex)
    x = _project(H, x, P)
    history = []
    residuals = []  # consecutive steps with a settled energy
    energy = None
    for it in range(1, opts.max_iter + 1):
        x = _project(H, fac.solve(x), P)
        x = x / np.sqrt(np.sum(w * np.abs(x) ** 2))
        hx = H.apply(x)
        rq = np.sum(w * np.conj(x) * hx)
        e = float(rq.real)
        history.append(e)
        if energy is not None and abs(e - energy) <= opts.tol:
            res = float(np.sqrt(np.sum(w * np.abs(hx - rq * x) ** 2)))
            residuals.append(res)
            scale = max(1.0, abs(e))
            if res <= RESIDUAL_TOL * scale:
                return e, x, res, it, tuple(history), fac.sigma
            # fine grids near the origin amplify solve roundoff beyond RESIDUAL_TOL
            stalled = len(residuals) >= 4 and res >= STALL_FACTOR * residuals[-4]
            if stalled and res <= RESIDUAL_FLOOR * scale:
                return e, x, res, it, tuple(history), fac.sigma
        else:
            residuals.clear()
        energy = e
        if opts.rayleigh_after is not None and it >= opts.rayleigh_after:
            fac = factorize_nudged(H, e, opts.super_block)
    raise ConvergenceError(f"inverse iteration did not converge in {opts.max_iter} steps "
                           f"(sigma={fac.sigma!r})", history)


# targets

@dataclass(frozen=True)
class GroundState:
    def label(self) -> str:
        return "ground"


@dataclass(frozen=True)
class NearEnergy:
    sigma: float

    def label(self) -> str:
        return f"near:{self.sigma!r}"


@dataclass(frozen=True)
class Level:
    """Level with principal number ``n`` and angular momentum ``l``.

    ``n - |l|`` counts states within the l sector; at zero field the energy
    is -2 m_r/(2n-1)^2.
    """

    n: int
    l: int = 0

    def __post_init__(self):
        if self.n < 1 or abs(self.l) > self.n - 1:
            raise ValueError(f"need n >= 1 and |l| <= n - 1, got n={self.n}, l={self.l}")

    @classmethod
    def in_sector(cls, k: int, l: int) -> "Level":
        """The k-th state (k >= 1) of sector l."""
        return cls(k + abs(l), l)

    @property
    def sector_index(self) -> int:
        return self.n - abs(self.l)

    def label(self) -> str:
        return f"level:{self.n},{self.l}"


Target = GroundState | NearEnergy | Level


def parse_target(text: str) -> Target:
    s = text.strip().lower()
    if s == "ground":
        return GroundState()
    if s.startswith("near:"):
        return NearEnergy(float(s[5:]))
    if s.startswith("level:"):
        parts = s[6:].split(",")
        return Level(int(parts[0]), int(parts[1]) if len(parts) > 1 else 0)
    raise ValueError(f"target must be 'ground', 'near:<E>' or 'level:<n>[,<l>]', got {text!r}")


@dataclass(frozen=True)
class SolverOptions:
    N: int = 800
    M: int | None = None
    rho_N: float | None = None
    tol: float = 1e-10
    max_iter: int = 200
    seed: int = DEFAULT_SEED
    rayleigh_after: int | None = None
    super_block: int | None = None


def _sharp_channel(config: PhysicalConfig, target: Target) -> int | None:
    if not config.lz_is_sharp:
        if isinstance(target, Level):
            raise ValueError("Level targets need B = 0 or alpha = 0, where l is a good quantum number")
        return None
    if isinstance(target, Level):
        return target.l
    if isinstance(target, GroundState):
        return 0
    return None


def resolved_M(config: PhysicalConfig, target: Target, M: int | None) -> int:
    channel = _sharp_channel(config, target)
    if M is None:
        return abs(channel) if channel is not None else 8
    if channel is not None and abs(channel) > M:
        raise ValueError(f"channel l={channel} needs M >= {abs(channel)}")
    return M


def resolved_rho_N(config: PhysicalConfig, target: Target, rho_N: float | None) -> float:
    if rho_N is not None:
        return rho_N
    n = target.n if isinstance(target, Level) else 1
    return default_box_radius(config.B, n)


def sector_spectrum(config: PhysicalConfig, rho_N: float, l: int, N: int = 400) -> np.ndarray:
    """Sorted real parts of the full spectrum of a coarse one-channel model."""
    Hc = assemble_channel(config, build_radial_grid(N, rho_N), l)
    return np.sort(sla.eigvals(Hc.to_dense()).real)


def ground_shift(config: PhysicalConfig) -> float:
    """Shift for the ground state: a rough estimate lowered by a 10% margin."""
    est = tilted_ground_estimate(config.B, config.alpha, config.m_r, config.mu_p - config.mu_e)
    return est - 0.1 * max(1.0, abs(est))


def solve_target(config: PhysicalConfig, target: Target, opts: SolverOptions | None = None,
                 shift: float | None = None) -> SolveResult:
    """Solve for one target on a single resolution.

    ``shift`` overrides the automatic shift choice (used by the ladder).
    """
    opts = opts or SolverOptions()
    M = resolved_M(config, target, opts.M)
    rho_N = resolved_rho_N(config, target, opts.rho_N)
    channel = _sharp_channel(config, target)
    grid = build_radial_grid(opts.N, rho_N)
    basis = build_basis(M)
    H = assemble(config, grid, basis, derivative_stencils(grid))

    if shift is not None:
        sigma = shift
    elif isinstance(target, NearEnergy):
        sigma = target.sigma
    elif channel is not None:
        k = target.sector_index if isinstance(target, Level) else 1
        ev = sector_spectrum(config, rho_N, channel, min(opts.N, 400))
        sigma = float(ev[k - 1])
    else:
        sigma = ground_shift(config)

    it_opts = IterationOptions(tol=opts.tol, max_iter=opts.max_iter, rayleigh_after=opts.rayleigh_after,
                               seed=opts.seed, channel=channel, super_block=opts.super_block)
    e, x, res, its, hist, used = inverse_iteration(H, sigma, it_opts)
    state = normalize(Wavefunction(x.reshape(grid.N, basis.n_ang), grid, basis))
    lz = None
    if channel is not None:
        lz = lz_expectation(state)
        if abs(lz - channel) > 1e-6:
            raise ClassificationError(f"expected l={channel}, measured <L_z>={lz:.8f}", lz)
    return SolveResult(e, state, res, its, hist, grid.N, rho_N, M, used, lz)


def ladder(config: PhysicalConfig, target: Target, rungs: int = 3):
    """Resolutions (N, M, rho_N) tried by ``converge``."""
    channel = _sharp_channel(config, target)
    rho0 = resolved_rho_N(config, target, None)
    out = []
    for r in range(rungs):
        M = abs(channel) if channel is not None else 8 * 2**r
        out.append((800 * 2**r, M, rho0 * (1.0 if r == 0 else 1.5)))
    return out


def converge(config: PhysicalConfig, target: Target, tol: float = 1e-7,
             base: SolverOptions | None = None, rungs: int = 3) -> SolveResult:
    """Refine N, M and rho_N until successive energies agree within ``tol``."""
    if tol < 1e-8:
        raise ValueError("ladder tolerance must be >= 1e-8")
    base = base or SolverOptions()
    energies = []
    prev = None
    for N, M, rho_N in ladder(config, target, rungs):
        opts = replace(base, N=N, M=M, rho_N=rho_N)
        shift = None
        if prev is not None:
            shift = prev.energy - 1e-7 * max(1.0, abs(prev.energy))
        res = solve_target(config, target, opts, shift=shift)
        energies.append(res.energy)
        if prev is not None and abs(res.energy - prev.energy) <= tol:
            return replace(res, ladder=tuple(energies))
        prev = res
    raise ConvergenceError(f"ladder exhausted without agreement to {tol:g}: {energies}", energies)
