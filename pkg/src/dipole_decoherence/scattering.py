"""Dipole-dipole Born scattering off a finite-size crystal.

The environmental particle (mass ``m``, dipole ``d2``) scatters elastically
off a crystal of radius ``R`` carrying a dipole ``d1``.  Interaction is cut off
inside ``r < R``, which multiplies the point-dipole amplitude by the uniform
sphere form factor.

Closed forms (``*_closed``) come with independent angular quadratures
(``*_quadrature``) built directly on :func:`differential_cross_section`.

Notes
-----
Write ``x = R q / hbar``, ``b = R p0 / hbar``, ``a = 2 b``.  With the coupling
area ``C = (m d1 d2 / (eps0 hbar^2))^2`` all cross sections reduce to

* ``dsigma/dOmega = (4 C / 3 pi) (k(x)/x^3)^2``
* ``sigma_CM = (C / 48) B(b) / b^6``, ``B = -1 - 8b^2 + 32b^4 + cos 4b + 4b sin 4b``
* ``sigma_eff = (16 C / 9) E(a) / a^6``,
  ``E = a^2 (ln 4a^2 - 2 Ci(2a) + 2(gamma - 1)) + 2a sin 2a + cos 2a - 1``

which keeps every intermediate O(1) instead of dividing ``p0^6`` factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import integrate_chunked
from .errors import DomainError, RegimeError
from .quantities import CONSTANTS
from .special import EULER_GAMMA, cosine_integral, form_factor_ratio

__all__ = [
    "DipolePair",
    "ScatteringContext",
    "Kinematics",
    "potential_fourier_transform",
    "differential_cross_section",
    "differential_cross_section_normalized",
    "momentum_transfer",
    "sigma_cm_closed",
    "sigma_cm_quadrature",
    "sigma_eff_closed",
    "sigma_eff_quadrature",
    "sigma_eff_large_a",
    "sigma_cm_bracket",
    "sigma_eff_bracket",
]

CM_SERIES_SWITCH = 0.05
EFF_SERIES_SWITCH = 0.5
LARGE_A_MIN = 10.0


@dataclass(frozen=True)
class DipolePair:
    """Crystal dipole ``d1`` and environmental dipole ``d2``, both in C m."""

    d1: float
    d2: float

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise DomainError("dipole magnitudes must be non-negative")


@dataclass(frozen=True)
class ScatteringContext:
    pair: DipolePair
    m: float  # environmental particle mass, kg
    R: float  # crystal radius, m

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError("environmental mass must be positive")
        if not self.R > 0:
            raise DomainError("crystal radius must be positive")

    @property
    def coupling_area(self):
        """``(m d1 d2 / (eps0 hbar^2))^2`` in m^2."""
        c = CONSTANTS
        return (self.m * self.pair.d1 * self.pair.d2 / (c.eps0 * c.hbar**2)) ** 2

    def kinematics(self, p0) -> "Kinematics":
        return Kinematics(p0, 2.0 * self.R * p0 / CONSTANTS.hbar)


@dataclass(frozen=True)
class Kinematics:
    """Incident momentum ``p0`` and its size parameter ``a = 2 R p0 / hbar``.

    Build it with :meth:`ScatteringContext.kinematics` so that ``a`` matches
    the crystal radius.
    """

    p0: float
    a: float

    def __post_init__(self):
        if self.p0 < 0 or self.a < 0:
            raise DomainError("momentum must be non-negative")


def _checked(ctx, kin):
    expected = 2.0 * ctx.R * kin.p0 / CONSTANTS.hbar
    if not math.isclose(kin.a, expected, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"Kinematics.a = {kin.a} inconsistent with 2 R p0 / hbar = {expected}")
    return kin


def potential_fourier_transform(ctx: ScatteringContext, q, d2z):
    """Fourier transform of the cut-off dipole-dipole potential, in J m^3.

    ``V(q) = 2 d1 d2z hbar^3 / (eps0 R^3 q^3) * k(R q / hbar)`` with the
    momentum transfer along ``d1``.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise DomainError("Fourier transform evaluated at q <= 0")
    x = ctx.R * q / CONSTANTS.hbar
    out = 2.0 * ctx.pair.d1 * d2z / CONSTANTS.eps0 * form_factor_ratio(x)
    return out if np.ndim(out) else float(out)


def differential_cross_section(ctx: ScatteringContext, q):
    """Orientation-averaged Born cross section ``dsigma/dOmega`` in m^2/sr.

    ``4 hbar^2 m^2 d1^2 d2^2 / (3 pi eps0^2 R^6 q^6) * k(R q / hbar)^2``.
    Finite at ``q = 0`` where it equals ``4 m^2 d1^2 d2^2 / (27 pi eps0^2 hbar^4)``.
    This is the unnormalised average over the ``d2`` direction
    (``int cos^2 dOmega = 4 pi / 3``); see
    :func:`differential_cross_section_normalized` for the ``1/4pi`` variant.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise DomainError("momentum transfer must be non-negative")
    x = ctx.R * q / CONSTANTS.hbar
    out = 4.0 * ctx.coupling_area / (3.0 * math.pi) * form_factor_ratio(x) ** 2
    return out if np.ndim(out) else float(out)


def differential_cross_section_normalized(ctx: ScatteringContext, q):
    """Born cross section with a normalised ``d2`` orientation average.

    Equals ``m^2 / (4 pi^2 hbar^4) <|V(q)|^2>`` with ``<cos^2> = 1/3``, i.e.
    :func:`differential_cross_section` divided by ``4 pi``.
    """
    return differential_cross_section(ctx, q) / (4.0 * math.pi)


def momentum_transfer(p0, theta):
    """Elastic momentum transfer ``2 p0 sin(theta/2)``."""
    if p0 < 0:
        raise DomainError("momentum must be non-negative")
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"scattering angle {theta} outside [0, pi]")
    return 2.0 * p0 * math.sin(0.5 * theta)


# --------------------------------------------------------------------------
# Brackets and their small-argument series
# --------------------------------------------------------------------------


def _cm_bracket_over_b6_series(b, terms=10):
    # B(b) = sum_{m>=3} (-1)^(m+1) (2m-1) (4b)^(2m) / (2m)!
    b2 = b * b
    total = 0.0
    for m in range(3, 3 + terms):
        total += (-1) ** (m + 1) * (2 * m - 1) * 4.0 ** (2 * m) / math.factorial(2 * m) * b2 ** (m - 3)
    return total


def sigma_cm_bracket(b):
    """``B(b) = -1 - 8b^2 + 32b^4 + cos 4b + 4b sin 4b`` (series below 0.05)."""
    if b < CM_SERIES_SWITCH:
        return _cm_bracket_over_b6_series(b) * b**6
    return -1.0 - 8.0 * b * b + 32.0 * b**4 + math.cos(4.0 * b) + 4.0 * b * math.sin(4.0 * b)


def _eff_bracket_over_a6_series(a, terms=16):
    # E(a) = sum_{m>=3} c_m (2a)^(2m),
    # c_m = (-1)^m [1 / (4 (m-1) (2m-2)!) - (2m-1) / (2m)!]
    z2 = 4.0 * a * a
    total = 0.0
    for m in range(3, 3 + terms):
        c = (-1) ** m * (1.0 / (4 * (m - 1) * math.factorial(2 * m - 2)) - (2 * m - 1) / math.factorial(2 * m))
        total += c * 64.0 * z2 ** (m - 3)
    return total


def sigma_eff_bracket(a):
    """``E(a)`` of the effective cross section (series below 0.5)."""
    if a < EFF_SERIES_SWITCH:
        return _eff_bracket_over_a6_series(a) * a**6
    ci = cosine_integral(2.0 * a)
    return (
        a * a * (math.log(4.0 * a * a) - 2.0 * ci + 2.0 * (EULER_GAMMA - 1.0))
        + 2.0 * a * math.sin(2.0 * a)
        + math.cos(2.0 * a)
        - 1.0
    )


# --------------------------------------------------------------------------
# Total and effective cross sections
# --------------------------------------------------------------------------


def sigma_cm_closed(ctx: ScatteringContext, kin: Kinematics):
    """Total cross section ``sigma_CM`` in m^2 from the closed-form bracket."""
    kin = _checked(ctx, kin)
    if kin.p0 == 0:
        raise DomainError("sigma_CM closed form evaluated at p0 = 0")
    b = 0.5 * kin.a
    if b < CM_SERIES_SWITCH:
        ratio = _cm_bracket_over_b6_series(b)
    else:
        ratio = sigma_cm_bracket(b) / b**6
    return ctx.coupling_area / 48.0 * ratio


def sigma_eff_closed(ctx: ScatteringContext, kin: Kinematics):
    """Effective (momentum-transfer weighted) cross section in m^2.

    At ``p0 = 0`` returns the finite isotropic limit
    ``16 m^2 d1^2 d2^2 / (81 eps0^2 hbar^4)``; only the bracket ``E(a)``
    vanishes there, not the cross section.
    """
    kin = _checked(ctx, kin)
    a = kin.a
    if a < EFF_SERIES_SWITCH:
        ratio = _eff_bracket_over_a6_series(a)
    else:
        ratio = sigma_eff_bracket(a) / a**6
    return 16.0 / 9.0 * ctx.coupling_area * ratio


def sigma_eff_large_a(ctx: ScatteringContext, kin: Kinematics):
    """Logarithmic large-``a`` form ``2 m^2 d1^2 d2^2 ln(4 R p0/hbar) / (9 eps0^2 R^4 p0^4)``."""
    kin = _checked(ctx, kin)
    if kin.a < LARGE_A_MIN:
        raise RegimeError(f"large-a approximation invalid for a = {kin.a:.3g} < {LARGE_A_MIN}")
    c = CONSTANTS
    p = kin.p0
    return (
        2.0
        * (ctx.m * ctx.pair.d1 * ctx.pair.d2 / (c.eps0 * ctx.R**2 * p**2)) ** 2
        / 9.0
        * math.log(4.0 * ctx.R * p / c.hbar)
    )


def _angular_integral(ctx, kin, weight, rtol):
    # int dOmega' over u = sin(theta'/2): sin(theta') dtheta' = 4u du
    p0 = kin.p0
    if p0 <= 0:
        raise DomainError("angular quadrature needs p0 > 0")

    def integrand(u):
        return weight(u) * differential_cross_section(ctx, 2.0 * p0 * u)

    width = math.pi / max(kin.a, 1.0)
    value, _ = integrate_chunked(
        integrand, 0.0, 1.0, rtol=rtol, max_width=width, breakpoints=(min(1.0, 1.0 / max(kin.a, 1e-300)),)
    )
    return value


def sigma_cm_quadrature(ctx: ScatteringContext, kin: Kinematics, rtol=1e-8):
    """``2 pi int_0^pi sin(theta') dsigma/dOmega' dtheta'`` by adaptive quadrature."""
    kin = _checked(ctx, kin)
    return 8.0 * math.pi * _angular_integral(ctx, kin, lambda u: u, rtol)


def sigma_eff_quadrature(ctx: ScatteringContext, kin: Kinematics, rtol=1e-8):
    """``(2 pi/3) int d(cos theta') (1 - cos theta') dsigma/dOmega'`` by quadrature."""
    kin = _checked(ctx, kin)
    return 16.0 * math.pi / 3.0 * _angular_integral(ctx, kin, lambda u: u**3, rtol)
