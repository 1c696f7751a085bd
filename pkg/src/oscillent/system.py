"""Physical and dimensionless parameterizations of the two-oscillator system.

A pair of distinguishable masses m1, m2 interacts through a quadratic potential
of angular frequency ``omega`` (the relative or "molecular" mode) while the
center of mass sits in a harmonic trap of frequency ``Omega``; ``Omega = 0``
encodes the untrapped pair whose center-of-mass wave packet spreads freely.
Everything downstream consumes the derived inverse-length scales

    Gamma = sqrt(M * Omega / hbar)   (center-of-mass mode)
    gamma = sqrt(mu * omega / hbar)  (relative mode)

and the mass fractions ``mu1``, ``mu2``.  For the untrapped system ``Gamma``
is a free initial-condition parameter (the momentum spread of the packet at
the instant of minimum uncertainty) rather than a derived quantity.

The equilibrium separation of the pair is fixed to zero: shifting it is a
local unitary in either coordinate system and cannot change any entanglement
quantity, so no API accepts it.

All objects here are frozen dataclasses; they are safe to share across
threads without coordination.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "OscillatorSystem",
    "Coherent",
    "NumberState",
    "Superposition",
    "UnboundGaussian",
    "StateSpec",
]

_NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class OscillatorSystem:
    """Two coupled oscillators and every derived constant used elsewhere.

    Construct through :meth:`from_physical`, :meth:`from_dimensionless` or
    :meth:`from_untrapped` rather than directly; the constructors validate
    their domains and pick the appropriate gauge.

    Attributes
    ----------
    m1, m2 : float
        Masses, strictly positive.
    omega : float
        Relative-mode angular frequency, strictly positive.
    Omega : float
        Trap (center-of-mass) angular frequency; 0 means untrapped.
    hbar : float
        Action scale, strictly positive.
    Gamma : float
        Center-of-mass inverse length sqrt(M*Omega/hbar) when trapped,
        otherwise the free initial-condition parameter of the wave packet.
    """

    m1: float
    m2: float
    omega: float
    Omega: float
    hbar: float = 1.0
    Gamma: float = field(default=0.0)

    def __post_init__(self):
        for name in ("m1", "m2", "omega", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.Omega < 0:
            raise DomainError(f"Omega must be nonnegative, got {self.Omega}")
        if not self.Gamma > 0:
            raise DomainError(f"Gamma must be positive, got {self.Gamma}")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_physical(cls, m1, m2, omega, OmegaTrap, hbar=1.0, Gamma=None):
        """Build from laboratory parameters.

        ``Gamma`` must be supplied when ``OmegaTrap == 0`` (it is then an
        initial condition of the center-of-mass packet) and must be omitted
        when ``OmegaTrap > 0`` (it is then derived).
        """
        if m1 <= 0 or m2 <= 0:
            raise DomainError("masses must be positive")
        if omega <= 0:
            raise DomainError("omega must be positive")
        if hbar <= 0:
            raise DomainError("hbar must be positive")
        if OmegaTrap < 0:
            raise DomainError("OmegaTrap must be nonnegative")
        if OmegaTrap > 0:
            if Gamma is not None:
                raise DomainError("Gamma is derived from the trap; do not pass it when OmegaTrap > 0")
            Gamma = math.sqrt((m1 + m2) * OmegaTrap / hbar)
        else:
            if Gamma is None:
                raise DomainError("untrapped system needs an explicit Gamma initial condition")
        return cls(m1=float(m1), m2=float(m2), omega=float(omega),
                   Omega=float(OmegaTrap), hbar=float(hbar), Gamma=float(Gamma))

    @classmethod
    def from_dimensionless(cls, g, mu1):
        """Canonical-gauge trapped system: Gamma = 1, hbar = 1, total mass 1.

        Every purity of a trapped state depends only on (g, mu1), so this
        gauge loses nothing.
        """
        if not g > 0:
            raise DomainError(f"g must be positive, got {g}")
        if not 0 < mu1 < 1:
            raise DomainError(f"mu1 must lie strictly in (0, 1), got {mu1}")
        # M = 1 and Gamma = 1 force Omega = 1, hence omega = g.
        return cls(m1=float(mu1), m2=float(1.0 - mu1), omega=float(g),
                   Omega=1.0, hbar=1.0, Gamma=1.0)

    @classmethod
    def from_untrapped(cls, mu1, Gamma=1.0, c=None, gamma=None):
        """Untrapped system in the canonical gauge (hbar = 1, total mass 1).

        Exactly one of ``c`` (= Gamma/gamma) or ``gamma`` selects the
        relative-mode scale.
        """
        if not 0 < mu1 < 1:
            raise DomainError(f"mu1 must lie strictly in (0, 1), got {mu1}")
        if not Gamma > 0:
            raise DomainError(f"Gamma must be positive, got {Gamma}")
        if (c is None) == (gamma is None):
            raise DomainError("pass exactly one of c or gamma")
        if c is not None:
            if not c > 0:
                raise DomainError(f"c must be positive, got {c}")
            gamma = Gamma / c
        if not gamma > 0:
            raise DomainError(f"gamma must be positive, got {gamma}")
        mu_red = mu1 * (1.0 - mu1)
        omega = gamma * gamma / mu_red  # hbar = 1, M = 1
        return cls(m1=float(mu1), m2=float(1.0 - mu1), omega=float(omega),
                   Omega=0.0, hbar=1.0, Gamma=float(Gamma))

    # ------------------------------------------------------------------
    # derived quantities
    # ------------------------------------------------------------------

    @property
    def M_total(self) -> float:
        return self.m1 + self.m2

    @property
    def mu_reduced(self) -> float:
        return self.m1 * self.m2 / self.M_total

    @property
    def mu1(self) -> float:
        return self.m1 / self.M_total

    @property
    def mu2(self) -> float:
        # 1 - mu1 exactly, so the mu1 <-> mu2 symmetry is testable to the bit
        return 1.0 - self.mu1

    @property
    def is_trapped(self) -> bool:
        return self.Omega > 0

    @property
    def g(self) -> float:
        """Frequency ratio omega/Omega; defined only for trapped systems."""
        if not self.is_trapped:
            raise DomainError("g = omega/Omega is undefined for an untrapped system")
        return self.omega / self.Omega

    @property
    def gamma(self) -> float:
        """Relative-mode inverse length sqrt(mu * omega / hbar)."""
        return math.sqrt(self.mu_reduced * self.omega / self.hbar)

    @property
    def c(self) -> float:
        """Scale ratio Gamma/gamma."""
        return self.Gamma / self.gamma


# ----------------------------------------------------------------------
# state descriptions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Coherent:
    """Two-mode coherent state: ``alpha`` displaces the relative mode,
    ``beta`` the center-of-mass mode."""

    alpha: complex = 0j
    beta: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))


@dataclass(frozen=True)
class NumberState:
    """Joint eigenstate |m, n> of the relative (m) and center-of-mass (n)
    mode number operators."""

    m: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise DomainError("quantum numbers must be integers")
        if self.m < 0 or self.n < 0:
            raise DomainError(f"quantum numbers must be nonnegative, got ({self.m}, {self.n})")


@dataclass(frozen=True)
class Superposition:
    """Finite superposition sum_k c_k |m_k, n_k> with sum |c_k|^2 = 1.

    ``terms`` is a tuple of (m, n, coefficient) triples.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(m), int(n), complex(cf)) for (m, n, cf) in self.terms)
        if not terms:
            raise DomainError("superposition needs at least one term")
        for (m, n, _) in terms:
            if m < 0 or n < 0:
                raise DomainError(f"quantum numbers must be nonnegative, got ({m}, {n})")
        if len({(m, n) for (m, n, _) in terms}) != len(terms):
            raise DomainError("duplicate (m, n) labels in superposition")
        norm = sum(abs(cf) ** 2 for (_, _, cf) in terms)
        if abs(norm - 1.0) > _NORMALIZATION_TOL:
            raise DomainError(f"superposition is not normalized: sum |c|^2 = {norm!r}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def two_mode_mix(cls, theta: float) -> "Superposition":
        """The one-excitation family cos(theta)|0,1> + sin(theta)|1,0>."""
        return cls(((0, 1, math.cos(theta)), (1, 0, math.sin(theta))))


@dataclass(frozen=True)
class UnboundGaussian:
    """Relative vibrational state m combined with a spreading center-of-mass
    Gaussian packet at dimensionless time tau = Gamma^2 * hbar * t / M.

    Only meaningful for untrapped systems (Omega = 0); the consuming
    operations enforce that.
    """

    m: int
    tau: float

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise DomainError(f"vibrational index must be a nonnegative integer, got {self.m}")
        if cmath.isnan(self.tau) or cmath.isinf(self.tau):
            raise DomainError("tau must be finite")
        object.__setattr__(self, "tau", float(self.tau))


StateSpec = Coherent | NumberState | Superposition | UnboundGaussian
