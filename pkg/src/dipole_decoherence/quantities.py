"""SI constants, a small dimension-checked scalar type, and thermal kinematics.

Everything downstream works in SI doubles.  :class:`Quantity` exists so that
formula prefactors can be audited dimensionally (see ``tests/test_quantities``)
and so that configuration values given with unit tokens ("3 Debye",
"1.71 angstrom3") are converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnitError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "Dimension",
    "Quantity",
    "DIMENSIONLESS",
    "UNITS",
    "parse_quantity",
    "pressure_to_number_density",
    "mean_thermal_momentum",
    "thermal_wavelength",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in SI units."""

    hbar: float = 1.054571817e-34  # J s
    k_B: float = 1.380649e-23  # J / K
    eps0: float = 8.8541878128e-12  # C^2 N^-1 m^-2
    e_charge: float = 1.602176634e-19  # C
    debye: float = 1e-21 / 299792458.0  # C m  (~3.336e-30)

    def __post_init__(self):
        for name in ("hbar", "k_B", "eps0", "e_charge", "debye"):
            if not getattr(self, name) > 0:
                raise DomainError(f"physical constant {name} must be positive")


CONSTANTS = PhysicalConstants()

ANGSTROM = 1e-10
ANGSTROM3 = ANGSTROM**3


# --------------------------------------------------------------------------
# Dimensions
# --------------------------------------------------------------------------

_BASE = ("kg", "m", "s", "K", "A")


@dataclass(frozen=True)
class Dimension:
    """Integer exponents over the SI base units (kg, m, s, K, A)."""

    kg: int = 0
    m: int = 0
    s: int = 0
    K: int = 0
    A: int = 0

    def _vec(self):
        return (self.kg, self.m, self.s, self.K, self.A)

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(*(a + b for a, b in zip(self._vec(), other._vec())))

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(*(a - b for a, b in zip(self._vec(), other._vec())))

    def __pow__(self, n: int) -> "Dimension":
        if not isinstance(n, int):
            raise TypeError("dimension exponents must be integers")
        return Dimension(*(a * n for a in self._vec()))

    def root(self, n: int) -> "Dimension":
        vec = self._vec()
        if any(a % n for a in vec):
            raise UnitError(f"cannot take root {n} of dimension {self}")
        return Dimension(*(a // n for a in vec))

    def __str__(self):
        parts = [f"{u}^{e}" if e != 1 else u for u, e in zip(_BASE, self._vec()) if e]
        return " ".join(parts) or "1"


DIMENSIONLESS = Dimension()
MASS = Dimension(kg=1)
LENGTH = Dimension(m=1)
TIME = Dimension(s=1)
TEMPERATURE = Dimension(K=1)
CURRENT = Dimension(A=1)
CHARGE = CURRENT * TIME
ENERGY = MASS * LENGTH**2 / TIME**2
MOMENTUM = MASS * LENGTH / TIME
ACTION = ENERGY * TIME
PRESSURE = ENERGY / LENGTH**3
DIPOLE = CHARGE * LENGTH
AREA = LENGTH**2
VOLUME = LENGTH**3
NUMBER_DENSITY = LENGTH**-3
FREQUENCY = Dimension(s=-1)
FIELD = ENERGY / LENGTH / CHARGE  # N/C
PERMITTIVITY = CHARGE**2 / (ENERGY * LENGTH)
DENSITY = MASS / VOLUME


class Quantity:
    """A real value tagged with a :class:`Dimension`.

    Addition and subtraction require identical dimensions; multiplication and
    division combine them.  Non-integer powers are not tracked: use
    :meth:`sqrt` only where the exponents are even.
    """

    __slots__ = ("value", "dim")

    def __init__(self, value, dim: Dimension = DIMENSIONLESS):
        self.value = float(value)
        self.dim = dim

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quantity):
            return other
        return Quantity(other, DIMENSIONLESS)

    def _check_same(self, other, op):
        if self.dim != other.dim:
            raise UnitError(f"cannot {op} [{self.dim}] and [{other.dim}]")

    def __add__(self, other):
        other = self._coerce(other)
        self._check_same(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        self._check_same(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        other = self._coerce(other)
        return Quantity(self.value * other.value, self.dim * other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return Quantity(self.value / other.value, self.dim / other.dim)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        return Quantity(self.value**n, self.dim**n)

    def sqrt(self) -> "Quantity":
        return Quantity(math.sqrt(self.value), self.dim.root(2))

    def to(self, dim: Dimension) -> float:
        """Return the SI value after asserting the dimension is ``dim``."""
        if self.dim != dim:
            raise UnitError(f"expected [{dim}], got [{self.dim}]")
        return self.value

    def __eq__(self, other):
        other = self._coerce(other)
        return self.dim == other.dim and self.value == other.value

    def __repr__(self):
        return f"Quantity({self.value!r}, [{self.dim}])"


#: Recognised unit tokens: name -> (SI factor, dimension).
UNITS: dict[str, tuple[float, Dimension]] = {
    "kg": (1.0, MASS),
    "m": (1.0, LENGTH),
    "um": (1e-6, LENGTH),
    "nm": (1e-9, LENGTH),
    "angstrom": (ANGSTROM, LENGTH),
    "s": (1.0, TIME),
    "Hz": (1.0, FREQUENCY),
    "K": (1.0, TEMPERATURE),
    "Pa": (1.0, PRESSURE),
    "mbar": (100.0, PRESSURE),
    "m-3": (1.0, NUMBER_DENSITY),
    "m3": (1.0, VOLUME),
    "angstrom3": (ANGSTROM3, VOLUME),
    "A3": (ANGSTROM3, VOLUME),
    "Cm": (1.0, DIPOLE),
    "C*m": (1.0, DIPOLE),
    "Debye": (CONSTANTS.debye, DIPOLE),
    "D": (CONSTANTS.debye, DIPOLE),
    "N/C": (1.0, FIELD),
    "V/m": (1.0, FIELD),
    "kg/m3": (1.0, DENSITY),
}


def parse_quantity(text: str, expected: Dimension) -> float:
    """Parse ``"<number> [unit]"`` and return the SI value.

    A bare number is taken to be in SI units of ``expected``.
    """
    parts = text.split()
    if not parts or len(parts) > 2:
        raise UnitError(f"cannot parse quantity {text!r}")
    try:
        number = float(parts[0])
    except ValueError:
        raise UnitError(f"not a number: {parts[0]!r}") from None
    if len(parts) == 1:
        return number
    token = parts[1]
    if token not in UNITS:
        raise UnitError(f"unknown unit token {token!r}")
    factor, dim = UNITS[token]
    return Quantity(number * factor, dim).to(expected)


# --------------------------------------------------------------------------
# Thermal kinematics
# --------------------------------------------------------------------------


def pressure_to_number_density(p, T, constants: PhysicalConstants = CONSTANTS):
    """Ideal-gas number density ``n = p / (k_B T)`` in m^-3."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    if p < 0:
        raise DomainError(f"pressure must be non-negative, got {p}")
    return p / (constants.k_B * T)


def mean_thermal_momentum(m, T, constants: PhysicalConstants = CONSTANTS):
    """Characteristic thermal momentum ``sqrt(2 m k_B T)``.

    This is the most probable momentum of a Maxwell-Boltzmann gas.
    """
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")
    if T < 0:
        raise DomainError(f"temperature must be non-negative, got {T}")
    return math.sqrt(2.0 * m * constants.k_B * T)


def thermal_wavelength(m, T, constants: PhysicalConstants = CONSTANTS):
    """de Broglie wavelength ``2 pi hbar / sqrt(2 m k_B T)`` in metres."""
    if not T > 0:
        raise DomainError("thermal wavelength diverges at T = 0")
    return 2.0 * math.pi * constants.hbar / mean_thermal_momentum(m, T, constants)
