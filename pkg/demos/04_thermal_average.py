"""
Point estimate at the thermal momentum versus a Maxwell-Boltzmann average.

The published estimates put every gas molecule at p = sqrt(2 m k T).
Averaging over the thermal distribution instead raises the short-wavelength
rate by about 2/sqrt(pi), since Gamma_S ~ 1/p at large R p / hbar.
"""

import math

from dipole_decoherence.qgem import GasSpecies
from dipole_decoherence.rates import EnvironmentSpec, SuperpositionSpec, gamma_long, gamma_short
from dipole_decoherence.scattering import DipolePair, ScatteringContext
from dipole_decoherence.special import MomentumDistribution

m = 1e-27
for R in (1e-6, 1e-8, 1e-9):
    ctx = ScatteringContext(DipolePair(1e-30, 1e-29), m, R)
    for T in (0.1, 1.0, 10.0):
        env = EnvironmentSpec(GasSpecies("probe", m, 1e-29), T, 1e8)
        mb = MomentumDistribution.maxwell_boltzmann(m, T)
        s_delta, s_mb = gamma_short(ctx, env).gamma, gamma_short(ctx, env, mb).gamma
        sup = SuperpositionSpec(1e-11)
        l_delta, l_mb = gamma_long(ctx, env, sup).gamma, gamma_long(ctx, env, sup, mb).gamma
        print(f"R={R:.0e} T={T:5.1f}  short: {s_delta:.3e} -> {s_mb:.3e} (x{s_mb / s_delta:.3f})"
              f"  long: {l_delta:.3e} -> {l_mb:.3e} (x{l_mb / l_delta:.3f})")
print(f"2/sqrt(pi) = {2 / math.sqrt(math.pi):.4f}")
