"""Physical parameters and reduced-mass arithmetic.

Atomic units throughout (hbar = m_e = e = 1).  One atomic unit of magnetic
field is about 2.35e5 T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

DEFAULT_PROTON_MASS = 1836.152673
TESLA_PER_AU = 2.35e5


@dataclass(frozen=True)
class InfiniteProton:
    """Fixed Coulomb centre (m_p -> infinity)."""

    def label(self) -> str:
        return "infinite"


@dataclass(frozen=True)
class FiniteProton:
    """Proton of finite mass ``m_p`` in electron masses."""

    m_p: float = DEFAULT_PROTON_MASS

    def __post_init__(self):
        if not (self.m_p > 0 and math.isfinite(self.m_p)):
            raise ValueError(f"proton mass must be positive and finite, got {self.m_p!r}")

    def label(self) -> str:
        if self.m_p == DEFAULT_PROTON_MASS:
            return "finite"
        return f"finite:{self.m_p!r}"


MassMode = Union[InfiniteProton, FiniteProton]


def reduced_masses(mass_mode: MassMode) -> tuple[float, float, float]:
    """Return ``(m_r, mu_p, mu_e)`` for the given mass mode."""
    if isinstance(mass_mode, InfiniteProton):
        return 1.0, 1.0, 0.0
    if isinstance(mass_mode, FiniteProton):
        m_p = mass_mode.m_p
        if m_p <= 0:
            raise ValueError("proton mass must be positive")
        total = m_p + 1.0
        return m_p / total, m_p / total, 1.0 / total
    raise TypeError(f"unknown mass mode {mass_mode!r}")


def parse_mass_mode(text: str) -> MassMode:
    """Parse ``infinite``, ``finite`` or ``finite:<m_p>``."""
    s = text.strip().lower()
    if s == "infinite":
        return InfiniteProton()
    if s == "finite":
        return FiniteProton()
    if s.startswith("finite:"):
        return FiniteProton(float(s.split(":", 1)[1]))
    raise ValueError(f"mass mode must be 'infinite', 'finite' or 'finite:<m_p>', got {text!r}")


@dataclass(frozen=True)
class PhysicalConfig:
    """Field strength ``B`` (a.u.), tilt ``alpha`` (radians) and mass mode."""

    B: float = 0.0
    alpha: float = 0.0
    mass_mode: MassMode = field(default_factory=InfiniteProton)

    def __post_init__(self):
        if not (self.B >= 0 and math.isfinite(self.B)):
            raise ValueError(f"B must be finite and non-negative, got {self.B!r}")
        if not (0.0 <= self.alpha <= math.pi / 2 + 1e-15):
            raise ValueError(f"alpha must lie in [0, pi/2] radians, got {self.alpha!r}")

    @classmethod
    def from_degrees(cls, B: float, alpha_degrees: float, mass_mode: MassMode | None = None):
        if not (0.0 <= alpha_degrees <= 90.0):
            raise ValueError(f"alpha must lie in [0, 90] degrees, got {alpha_degrees!r}")
        mode = InfiniteProton() if mass_mode is None else mass_mode
        alpha = math.pi / 2 if alpha_degrees == 90.0 else math.radians(alpha_degrees)
        return cls(float(B), alpha, mode)

    @property
    def alpha_degrees(self) -> float:
        return math.degrees(self.alpha)

    @property
    def m_r(self) -> float:
        return reduced_masses(self.mass_mode)[0]

    @property
    def mu_p(self) -> float:
        return reduced_masses(self.mass_mode)[1]

    @property
    def mu_e(self) -> float:
        return reduced_masses(self.mass_mode)[2]

    @property
    def cos_alpha(self) -> float:
        # exact zero at 90 degrees so the Zeeman term vanishes identically
        return 0.0 if self.alpha == math.pi / 2 else math.cos(self.alpha)

    @property
    def sin2_alpha(self) -> float:
        return 1.0 if self.alpha == math.pi / 2 else math.sin(self.alpha) ** 2

    @property
    def lz_is_sharp(self) -> bool:
        """True when L_z commutes with the Hamiltonian."""
        return self.B == 0.0 or self.alpha == 0.0
