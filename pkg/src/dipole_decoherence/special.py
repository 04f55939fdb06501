"""Special functions and momentum distributions used by the rate formulas.

``form_factor_kernel`` is the uniform-sphere bracket ``sin x - x cos x``;
``cosine_integral`` is Ci(x).  Both have series branches for small argument
because the direct expressions cancel catastrophically there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._quad import integrate_chunked
from .errors import DomainError, NumericError, UnsupportedOperationError
from .quantities import CONSTANTS

__all__ = [
    "EULER_GAMMA",
    "form_factor_kernel",
    "form_factor_ratio",
    "cosine_integral",
    "DistributionKind",
    "MomentumDistribution",
    "momentum_pdf",
    "expectation_over_momentum",
]

EULER_GAMMA = 0.57721566490153286061

KERNEL_SWITCH = 0.5
KERNEL_TERMS = 6
CI_SWITCH = 4.0

# sin x - x cos x = sum_{n>=1} (-1)^(n+1) 2n x^(2n+1) / (2n+1)!
_KERNEL_COEFFS = np.array(
    [(-1) ** (n + 1) * 2 * n / math.factorial(2 * n + 1) for n in range(1, KERNEL_TERMS + 1)]
)


def _kernel_series_over_x3(x2):
    # Horner in x^2 of sum c_n x^(2n-2)
    acc = np.zeros_like(x2)
    for c in _KERNEL_COEFFS[::-1]:
        acc = acc * x2 + c
    return acc


def form_factor_kernel(x):
    """``k(x) = sin(x) - x cos(x)`` for ``x >= 0``; accepts arrays.

    Below ``x = 0.5`` a six-term Taylor series replaces the direct form.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("form_factor_kernel requires x >= 0")
    small = xa < KERNEL_SWITCH
    out = np.where(small, 0.0, np.sin(xa) - xa * np.cos(xa))
    if np.any(small):
        xs = xa[small] if xa.ndim else xa
        series = xs**3 * _kernel_series_over_x3(xs * xs)
        if xa.ndim:
            out[small] = series
        else:
            out = series
    return out if xa.ndim else float(out)


def form_factor_ratio(x):
    """``k(x) / x^3``, finite at the origin where it tends to 1/3."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("form_factor_ratio requires x >= 0")
    small = xa < KERNEL_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.sin(xa) - xa * np.cos(xa)) / xa**3
    out = np.where(small, _kernel_series_over_x3(xa * xa), direct)
    return out if xa.ndim else float(out)


# --------------------------------------------------------------------------
# Cosine integral
# --------------------------------------------------------------------------


def _ci_series(x):
    # Ci(x) = gamma + ln x + sum_{n>=1} (-x^2)^n / (2n (2n)!)
    x2 = x * x
    term = 1.0
    total = 0.0
    n = 1
    while True:
        term *= -x2 / ((2 * n - 1) * (2 * n))
        contrib = term / (2 * n)
        total += contrib
        if abs(contrib) < 1e-17 * max(abs(total), 1e-300) or n > 200:
            break
        n += 1
    return EULER_GAMMA + math.log(x) + total


def _ci_continued_fraction(x):
    # E1(ix) by modified Lentz; Ci(x) = -Re[E1(ix)]
    tiny = 1e-300
    b = complex(1.0, x)
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(2, 10000):
        a = -((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < 1e-16:
            break
    else:
        raise NumericError(f"Ci continued fraction did not converge at x = {x}")
    h *= complex(math.cos(x), -math.sin(x))
    return -h.real


def cosine_integral(x):
    """Cosine integral ``Ci(x) = -int_x^inf cos(t)/t dt`` for ``x > 0``.

    Power series below ``x = 4``; above, the auxiliary-function form
    ``f(x) sin x - g(x) cos x`` with ``f, g`` from the continued fraction of
    ``E1(ix)``, which unlike the divergent asymptotic series stays accurate to
    ~1e-16 at moderate ``x``.
    """
    if isinstance(x, np.ndarray):
        return np.vectorize(cosine_integral, otypes=[float])(x)
    x = float(x)
    if not x > 0:
        raise DomainError(f"Ci(x) requires x > 0, got {x}")
    if x < CI_SWITCH:
        return _ci_series(x)
    return _ci_continued_fraction(x)


# --------------------------------------------------------------------------
# Momentum distributions
# --------------------------------------------------------------------------


class DistributionKind(enum.Enum):
    DELTA_AT_MEAN = "delta"
    MAXWELL_BOLTZMANN = "mb"


@dataclass(frozen=True)
class MomentumDistribution:
    """Distribution ``S(p0)`` of incident momentum magnitudes.

    ``DELTA_AT_MEAN`` puts all weight at ``sqrt(2 m k_B T)``;
    ``MAXWELL_BOLTZMANN`` is the thermal speed distribution in momentum form.
    """

    kind: DistributionKind
    m: float
    T: float

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError("distribution mass must be positive")
        if self.T < 0:
            raise DomainError("distribution temperature must be non-negative")

    @classmethod
    def delta(cls, m, T):
        return cls(DistributionKind.DELTA_AT_MEAN, m, T)

    @classmethod
    def maxwell_boltzmann(cls, m, T):
        return cls(DistributionKind.MAXWELL_BOLTZMANN, m, T)

    @property
    def p_mean(self):
        """``sqrt(2 m k_B T)``: the delta location and the MB mode."""
        return math.sqrt(2.0 * self.m * CONSTANTS.k_B * self.T)

    @property
    def width(self):
        """Gaussian width parameter ``sqrt(m k_B T)``."""
        return math.sqrt(self.m * CONSTANTS.k_B * self.T)


def momentum_pdf(dist: MomentumDistribution, p0):
    """Maxwell-Boltzmann density ``4 pi p0^2 (2 pi m k_B T)^(-3/2) exp(-p0^2 / 2 m k_B T)``."""
    if dist.kind is DistributionKind.DELTA_AT_MEAN:
        raise UnsupportedOperationError("a delta distribution has no pointwise density")
    p0 = np.asarray(p0, dtype=float)
    if np.any(p0 < 0):
        raise DomainError("momentum must be non-negative")
    mkt = dist.m * CONSTANTS.k_B * dist.T
    if mkt == 0:
        raise DomainError("Maxwell-Boltzmann density is singular at T = 0")
    out = 4.0 * np.pi * p0**2 * (2.0 * np.pi * mkt) ** -1.5 * np.exp(-(p0**2) / (2.0 * mkt))
    return out if out.ndim else float(out)


def expectation_over_momentum(dist: MomentumDistribution, f, rtol=1e-8, period=None):
    """``E[f(p0)]`` under ``dist``.

    Delta: ``f(p_mean)``.  Maxwell-Boltzmann: adaptive quadrature of ``S f``
    over ``[0, p_mean + 10 sqrt(m k_B T)]``; the neglected tail weighs < 1e-20.
    ``period`` (momentum units) flags an oscillation in ``f``; the range is
    then cut into chunks of 20 periods.
    """
    if dist.kind is DistributionKind.DELTA_AT_MEAN:
        return f(dist.p_mean)
    if dist.T == 0:
        raise DomainError("Maxwell-Boltzmann average needs T > 0")
    upper = dist.p_mean + 10.0 * dist.width

    def integrand(p):
        fp = f(p)
        if not math.isfinite(fp):
            raise NumericError(f"non-finite integrand {fp!r} at p0 = {p!r}")
        return momentum_pdf(dist, p) * fp

    value, _ = integrate_chunked(
        integrand,
        0.0,
        upper,
        rtol=rtol,
        max_width=None if period is None else 20.0 * period,
        breakpoints=(dist.p_mean, 2 * dist.p_mean, 4 * dist.p_mean),
    )
    return value
