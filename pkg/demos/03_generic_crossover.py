"""
Crossover of the generic rate between the long- and short-wavelength limits.

For a nanometre crystal (R p / hbar ~ 1) the full angular integral is
evaluated for separations from 1/100 to 100 thermal wavelengths.  Small
separations follow Gamma_L ~ dx^2, large ones saturate at Gamma_S.
"""

import numpy as np

from dipole_decoherence.qgem import GasSpecies
from dipole_decoherence.quantities import thermal_wavelength
from dipole_decoherence.rates import EnvironmentSpec, SuperpositionSpec, gamma_generic, gamma_long, gamma_short
from dipole_decoherence.scattering import DipolePair, ScatteringContext

m, T = 1e-27, 1.0
ctx = ScatteringContext(DipolePair(1e-30, 1e-29), m, 1e-9)
env = EnvironmentSpec(GasSpecies("probe", m, 1e-29), T, 1e8)
lam = thermal_wavelength(m, T)
g_short = gamma_short(ctx, env).gamma

print(f"lambda0 = {lam:.3e} m, Gamma_S = {g_short:.4e} Hz")
print(f"{'dx/lambda0':>11} {'Gamma':>12} {'/Gamma_S':>9} {'/Gamma_L':>9}")
for ratio in np.logspace(-2, 1.5, 15):
    dx = ratio * lam
    g = gamma_generic(ctx, env, dx)
    g_long = gamma_long(ctx, env, SuperpositionSpec(dx)).gamma
    print(f"{ratio:11.3g} {g.gamma:12.4e} {g.gamma / g_short:9.4f} {g.gamma / g_long:9.4f}")
