"""Self-checks run by ``dipdeco validate``.

Each check pairs a production routine with an independent evaluation and
reports the worst discrepancy against a fixed tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .quantities import CONSTANTS, mean_thermal_momentum
from .rates import EnvironmentSpec, SuperpositionSpec, gamma_generic, gamma_long, gamma_short
from .scattering import (
    DipolePair,
    ScatteringContext,
    sigma_cm_closed,
    sigma_cm_quadrature,
    sigma_eff_closed,
    sigma_eff_quadrature,
)
from .special import KERNEL_SWITCH, MomentumDistribution, cosine_integral, form_factor_kernel, momentum_pdf


@dataclass(frozen=True)
class CheckResult:
    name: str
    achieved: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.achieved <= self.tolerance)

    def as_dict(self):
        return {"check": self.name, "passed": self.passed, "achieved": self.achieved, "tolerance": self.tolerance}


def _rel(a, b):
    return abs(a - b) / abs(b)


def _a_grid(ctx, lo=1e-2, hi=1e3, points=20):
    return [ctx.kinematics(a * CONSTANTS.hbar / (2.0 * ctx.R)) for a in np.logspace(math.log10(lo), math.log10(hi), points)]


def _ci_fourier(x):
    # Ci(x) = -int_x^inf cos(t)/t dt via QUADPACK's Fourier-integral rule
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(lambda t: 1.0 / t, x, np.inf, weight="cos", wvar=1.0)
    return -value


def check_sigma_cm(ctx):
    worst = max(_rel(sigma_cm_closed(ctx, k), sigma_cm_quadrature(ctx, k)) for k in _a_grid(ctx))
    return CheckResult("sigma_cm closed vs quadrature", float(worst), 1e-6)


def check_sigma_eff(ctx):
    worst = max(_rel(sigma_eff_closed(ctx, k), sigma_eff_quadrature(ctx, k)) for k in _a_grid(ctx))
    return CheckResult("sigma_eff closed vs quadrature", float(worst), 1e-6)


def check_kernel_branches():
    x = KERNEL_SWITCH
    series = form_factor_kernel(np.nextafter(x, 0.0))
    direct = math.sin(x) - x * math.cos(x)
    return CheckResult("form factor kernel branch agreement", _rel(series, direct), 1e-10)


def check_cosine_integral():
    worst = max(abs(cosine_integral(x) - _ci_fourier(x)) for x in (0.5, 2.0, 20.0, 200.0))
    return CheckResult("Ci vs Fourier quadrature", worst, 1e-9)


def check_mb_normalization():
    dist = MomentumDistribution.maxwell_boltzmann(1e-27, 1.0)
    w = dist.width
    total, _ = integrate.quad(lambda x: w * momentum_pdf(dist, x * w), 0.0, np.inf, epsabs=0, epsrel=1e-13)
    return CheckResult("Maxwell-Boltzmann normalization", abs(total - 1.0), 1e-10)


def _plateau_setup():
    from .qgem import GasSpecies

    m, T = 1e-27, 1.0
    species = GasSpecies("probe", m, 1e-29)
    ctx = ScatteringContext(DipolePair(1e-30, 1e-29), m, 1e-9)
    env = EnvironmentSpec(species, T, 1e8)
    return ctx, env, mean_thermal_momentum(m, T)


def check_generic_short_plateau():
    ctx, env, p = _plateau_setup()
    sep = 100.0 * CONSTANTS.hbar / p
    return CheckResult(
        "generic rate -> short-wavelength plateau", _rel(gamma_generic(ctx, env, sep).gamma, gamma_short(ctx, env).gamma), 0.05
    )


def check_generic_long_plateau():
    ctx, env, p = _plateau_setup()
    sep = 0.01 * CONSTANTS.hbar / p
    long_rate = gamma_long(ctx, env, SuperpositionSpec(sep)).gamma
    return CheckResult("generic rate -> long-wavelength plateau", _rel(gamma_generic(ctx, env, sep).gamma, long_rate), 0.05)


def run_checks():
    """Run every self-check and return the list of :class:`CheckResult`."""
    ctx = ScatteringContext(DipolePair(1e-30, 1e-29), 1e-27, 1e-6)
    return [
        check_sigma_cm(ctx),
        check_sigma_eff(ctx),
        check_kernel_branches(),
        check_cosine_integral(),
        check_mb_normalization(),
        check_generic_short_plateau(),
        check_generic_long_plateau(),
    ]
