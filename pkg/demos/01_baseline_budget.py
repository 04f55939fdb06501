"""
Decoherence budget for a micron diamond in a cryogenic vacuum chamber.

A stray molecule with a ~1e-29 C m dipole polarises the crystal; we compare
the exact short-wavelength rate, its large-radius simplification and the
long-wavelength estimate, then check the result against a 1e-2 Hz budget.
"""

import math

from dipole_decoherence.qgem import GasSpecies, induced_crystal_dipole
from dipole_decoherence.quantities import thermal_wavelength
from dipole_decoherence.rates import (
    EnvironmentSpec,
    SuperpositionSpec,
    classify_regime,
    gamma_long,
    gamma_short,
    gamma_short_approx,
    off_diagonal_decay,
)
from dipole_decoherence.scattering import DipolePair, ScatteringContext

# %% scenario
m_gas = 1e-27  # kg
T = 1.0  # K
n = 1e8  # m^-3
R = 1e-6  # m
dx = 1e-5  # m
d2 = 1e-29  # C m
d1 = induced_crystal_dipole(d2, eps_r=5.7)
print(f"induced crystal dipole d1 = {d1:.3e} C m")

gas = GasSpecies("stray", m_gas, d2)
ctx = ScatteringContext(DipolePair(d1, d2), m_gas, R)
env = EnvironmentSpec(gas, T, n)
sup = SuperpositionSpec(dx, hold_time=1.0)

# %% which limit applies?
lam = thermal_wavelength(m_gas, T)
print(f"thermal wavelength {lam:.2e} m vs superposition {dx:.0e} m -> {classify_regime(env, sup).value}")

# %% rates
short = gamma_short(ctx, env)
approx = gamma_short_approx(ctx, env)
long_ = gamma_long(ctx, env, sup)
print(f"Gamma_S (exact bracket)      = {short.gamma:.4e} Hz")
print(f"Gamma_S (large R p / hbar)   = {approx.gamma:.4e} Hz  (rel. diff {approx.gamma / short.gamma - 1:.1e})")
print(f"Gamma_L (if it applied)      = {long_.gamma:.4e} Hz  (upper bound, ratio {long_.gamma / short.gamma:.2e})")

# %% budget
budget = 1e-2
print(f"coherence time {short.coherence_time:.3e} s, budget {budget:g} Hz ->",
      "PASS" if short.gamma <= budget else "FAIL")
print(f"coherence left after {sup.hold_time:g} s: {off_diagonal_decay(1.0, short.gamma, sup.hold_time):.12f}")

# %% a permanent crystal dipole is far more dangerous
big = ScatteringContext(DipolePair(1e-23, 3.336e-30), m_gas, R)
g_big = gamma_short_approx(big, env).gamma
print(f"with d1 = 1e-23 C m and d2 = 1 D: Gamma_S = {g_big:.3e} Hz (log10 {math.log10(g_big):.1f})")
