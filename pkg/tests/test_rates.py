import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import M_ENV, make_setup
from dipole_decoherence.errors import DomainError, RegimeError
from dipole_decoherence.quantities import CONSTANTS, mean_thermal_momentum, thermal_wavelength
from dipole_decoherence.rates import (
    RATE_PREFACTOR,
    EnvironmentSpec,
    RateResult,
    Regime,
    SuperpositionSpec,
    classify_regime,
    decay_density_matrix,
    gamma_generic,
    gamma_long,
    gamma_short,
    gamma_short_approx,
    off_diagonal_decay,
)
from dipole_decoherence.scattering import sigma_cm_closed, sigma_eff_closed, sigma_eff_large_a
from dipole_decoherence.special import MomentumDistribution

HBAR = CONSTANTS.hbar
P_BAR = mean_thermal_momentum(M_ENV, 1.0)


def sep_for(c):
    return c * HBAR / P_BAR


# ---------------------------------------------------------------- short


def test_short_closed_form_matches_cross_section_form(baseline):
    ctx, env = baseline
    res = gamma_short(ctx, env)
    via_sigma = RATE_PREFACTOR * env.n * P_BAR / M_ENV * sigma_cm_closed(ctx, ctx.kinematics(P_BAR))
    assert res.gamma == pytest.approx(via_sigma, rel=1e-12)
    assert res.diagnostics["prefactor_consistency"] == pytest.approx(1.0, rel=1e-12)


def test_baseline_short_rate_order(baseline):
    ctx, env = baseline
    assert abs(math.log10(gamma_short(ctx, env).gamma) + 9) <= 1


def test_simplified_short_rate_agrees_with_full(baseline):
    ctx, env = baseline
    full, approx = gamma_short(ctx, env).gamma, gamma_short_approx(ctx, env).gamma
    assert abs(approx - full) / full < 1e-4


def test_simplified_short_rate_regime_guard():
    ctx, env = make_setup(R=1e-9)
    with pytest.raises(RegimeError):
        gamma_short_approx(ctx, env)


def test_temperature_scaling_of_simplified_rate(baseline):
    ctx, env = baseline
    hot = EnvironmentSpec(env.species, 4 * env.T, env.n)
    assert gamma_short_approx(ctx, hot).gamma == pytest.approx(gamma_short_approx(ctx, env).gamma / 2, rel=1e-12)


def test_zero_density_gives_zero_rate(baseline, superposition):
    ctx, env = baseline
    empty = EnvironmentSpec(env.species, env.T, 0.0)
    assert gamma_short(ctx, empty).gamma == 0.0
    assert gamma_short_approx(ctx, empty).gamma == 0.0
    assert gamma_long(ctx, empty, superposition).gamma == 0.0
    assert gamma_short(ctx, empty).coherence_time == math.inf


def test_maxwell_boltzmann_short_rate(baseline):
    # rate ~ 1/p at large R p/hbar, and <1/p>_MB * p_mean = 2/sqrt(pi)
    ctx, env = baseline
    mb = MomentumDistribution.maxwell_boltzmann(ctx.m, env.T)
    ratio = gamma_short(ctx, env, mb).gamma / gamma_short(ctx, env).gamma
    assert ratio == pytest.approx(2 / math.sqrt(math.pi), rel=1e-4)


def test_distribution_must_match_environment(baseline):
    ctx, env = baseline
    with pytest.raises(DomainError):
        gamma_short(ctx, env, MomentumDistribution.delta(ctx.m, 2.0))


def test_mass_mismatch_rejected():
    ctx, _ = make_setup()
    _, env = make_setup(m=2e-27)
    with pytest.raises(DomainError):
        gamma_short(ctx, env)


# ---------------------------------------------------------------- long


def test_long_rate_log_form(baseline, superposition):
    ctx, env = baseline
    res = gamma_long(ctx, env, superposition)
    assert res.diagnostics["form"] == "log"
    c = P_BAR * superposition.delta_x / HBAR
    expected = RATE_PREFACTOR * env.n * P_BAR / M_ENV * c**2 * sigma_eff_large_a(ctx, ctx.kinematics(P_BAR))
    assert res.gamma == pytest.approx(expected, rel=1e-12)


def test_long_rate_closed_form_at_small_radius():
    ctx, env = make_setup(R=1e-9)
    sup = SuperpositionSpec(1e-12)
    res = gamma_long(ctx, env, sup)
    assert res.diagnostics["form"] == "closed"
    c = P_BAR * sup.delta_x / HBAR
    expected = RATE_PREFACTOR * env.n * P_BAR / M_ENV * c**2 * sigma_eff_closed(ctx, ctx.kinematics(P_BAR))
    assert res.gamma == pytest.approx(expected, rel=1e-12)


def test_long_rate_quadratic_in_separation(baseline):
    ctx, env = baseline
    g1 = gamma_long(ctx, env, SuperpositionSpec(1e-9)).gamma
    g2 = gamma_long(ctx, env, SuperpositionSpec(2e-9)).gamma
    assert g2 == pytest.approx(4 * g1, rel=1e-12)


def test_long_over_short_ratio(baseline, superposition):
    # Gamma_L / Gamma_S = (p dx / hbar)^2 sigma_eff / sigma_CM with the log-form sigma_eff
    ctx, env = baseline
    kin = ctx.kinematics(P_BAR)
    c = P_BAR * superposition.delta_x / HBAR
    ratio = gamma_long(ctx, env, superposition).gamma / gamma_short(ctx, env).gamma
    assert ratio == pytest.approx(c**2 * sigma_eff_large_a(ctx, kin) / sigma_cm_closed(ctx, kin), rel=1e-10)
    assert ratio > 1


def test_long_rate_maxwell_boltzmann_runs():
    ctx, env = make_setup(R=1e-9)
    mb = MomentumDistribution.maxwell_boltzmann(ctx.m, env.T)
    sup = SuperpositionSpec(1e-12)
    delta, thermal = gamma_long(ctx, env, sup).gamma, gamma_long(ctx, env, sup, mb).gamma
    assert thermal > 0 and 0.3 < thermal / delta < 3


# ---------------------------------------------------------------- generic


def test_generic_zero_separation():
    ctx, env = make_setup(R=1e-9)
    assert gamma_generic(ctx, env, 0.0).gamma == 0.0
    assert gamma_generic(ctx, env, np.zeros(3)).gamma == 0.0


def test_generic_vector_separation_uses_length():
    ctx, env = make_setup(R=1e-9)
    s = sep_for(2.0)
    g_vec = gamma_generic(ctx, env, [0.0, s * 0.6, s * 0.8]).gamma
    assert g_vec == pytest.approx(gamma_generic(ctx, env, s).gamma, rel=1e-12)


def sinc_oracle(ctx, env, sep):
    """Rotationally reduced form: the n0 average of the phase is sinc(2 c u)."""
    from scipy import integrate

    from dipole_decoherence.scattering import differential_cross_section

    c = P_BAR * sep / HBAR
    f = lambda u: 4 * u * differential_cross_section(ctx, 2 * P_BAR * u) * (1 - np.sinc(2 * c * u / np.pi))
    edges = np.linspace(0, 1, int(max(c, 1)) + 2)
    val = math.fsum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-11)[0] for a, b in zip(edges[:-1], edges[1:]))
    return RATE_PREFACTOR * env.n * P_BAR / ctx.m * 2 * math.pi * val


@pytest.mark.parametrize("c", [0.05, 1.0, 7.0, 40.0])
def test_generic_matches_rotational_reduction(c):
    ctx, env = make_setup(R=1e-9)
    sep = sep_for(c)
    assert gamma_generic(ctx, env, sep).gamma == pytest.approx(sinc_oracle(ctx, env, sep), rel=1e-7)


def test_generic_limits_and_imaginary_residual():
    ctx, env = make_setup(R=1e-9)
    short = gamma_generic(ctx, env, sep_for(100.0))
    long_ = gamma_generic(ctx, env, sep_for(0.01))
    assert short.gamma == pytest.approx(gamma_short(ctx, env).gamma, rel=0.05)
    assert long_.gamma == pytest.approx(gamma_long(ctx, env, SuperpositionSpec(sep_for(0.01))).gamma, rel=0.05)
    assert short.diagnostics["imag_residual"] < 1e-8
    assert long_.diagnostics["imag_residual"] < 1e-8


def test_generic_monotone_between_plateaus():
    ctx, env = make_setup(R=1e-9)
    lam = thermal_wavelength(ctx.m, env.T)
    seps = np.logspace(math.log10(lam / 100), math.log10(lam * 10), 20)
    rates = [gamma_generic(ctx, env, s).gamma for s in seps]
    assert np.all(np.diff(rates) > 0)
    assert rates[0] == pytest.approx(gamma_long(ctx, env, SuperpositionSpec(seps[0])).gamma, rel=0.05)


@pytest.mark.slow
def test_generic_plateau_at_hundred_wavelengths():
    ctx, env = make_setup(R=1e-9)
    lam = thermal_wavelength(ctx.m, env.T)
    assert gamma_generic(ctx, env, 100 * lam).gamma == pytest.approx(gamma_short(ctx, env).gamma, rel=0.05)


def test_generic_maxwell_boltzmann_between_limits():
    ctx, env = make_setup(R=1e-9)
    mb = MomentumDistribution.maxwell_boltzmann(ctx.m, env.T)
    sep = sep_for(0.01)
    g = gamma_generic(ctx, env, sep, mb).gamma
    assert g == pytest.approx(gamma_long(ctx, env, SuperpositionSpec(sep), mb).gamma, rel=0.01)


# ---------------------------------------------------------------- properties


@settings(max_examples=25, deadline=None)
@given(
    st.floats(1e-32, 1e-26),
    st.floats(1e-32, 1e-26),
    st.floats(0.0, 1e12),
    st.floats(0.05, 20.0),
    st.floats(-9.0, -5.0),
)
def test_rates_non_negative(d1, d2, n, T, log_dx):
    ctx, env = make_setup(d1=d1, d2=d2, n=n, T=T)
    sup = SuperpositionSpec(10**log_dx)
    for g in (gamma_short(ctx, env), gamma_short_approx(ctx, env), gamma_long(ctx, env, sup)):
        assert g.gamma >= 0 and math.isfinite(g.gamma)


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-32, 1e-26), st.floats(1e-32, 1e-26), st.floats(1e4, 1e12), st.floats(1.5, 10.0))
def test_linear_in_density_quadratic_in_dipoles(d1, d2, n, k):
    ctx, env = make_setup(d1=d1, d2=d2, n=n, R=1e-9)
    ctx_n, env_n = make_setup(d1=d1, d2=d2, n=k * n, R=1e-9)
    ctx_d1, env_d1 = make_setup(d1=k * d1, d2=d2, n=n, R=1e-9)
    ctx_d2, env_d2 = make_setup(d1=d1, d2=k * d2, n=n, R=1e-9)
    sep = sep_for(0.5)
    sup = SuperpositionSpec(sep)
    paths = [
        lambda c, e: gamma_short(c, e).gamma,
        lambda c, e: gamma_long(c, e, sup).gamma,
        lambda c, e: gamma_generic(c, e, sep).gamma,
    ]
    for path in paths:
        base = path(ctx, env)
        assert path(ctx_n, env_n) == pytest.approx(k * base, rel=1e-9)
        assert path(ctx_d1, env_d1) == pytest.approx(k * k * base, rel=1e-9)
        assert path(ctx_d2, env_d2) == pytest.approx(k * k * base, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(-9.0, -6.0), st.floats(-8.0, -4.0), st.floats(0.1, 10.0))
def test_short_classification_bounds_short_rate(log_r, log_dx, T):
    # holds once the superposition is a few crystal radii across
    R, dx = 10**log_r, 10**log_dx
    assume(dx >= 3 * R)
    ctx, env = make_setup(R=R, T=T)
    sup = SuperpositionSpec(dx)
    assume(classify_regime(env, sup) is Regime.SHORT)
    assert gamma_short(ctx, env).gamma <= gamma_long(ctx, env, sup).gamma


# ---------------------------------------------------------------- regimes


def test_classify_regime(baseline):
    _, env = baseline
    assert classify_regime(env, SuperpositionSpec(1e-5)) is Regime.SHORT
    lam = thermal_wavelength(M_ENV, 1.0)
    assert classify_regime(env, SuperpositionSpec(lam)) is Regime.INTERMEDIATE
    cold = EnvironmentSpec(env.species, 1e-10, env.n)
    assert classify_regime(cold, SuperpositionSpec(1e-5)) is Regime.LONG


def test_regime_threshold_temperature():
    # lambda0 = dx at T = 4 pi^2 hbar^2 / (2 m k_B dx^2), about 1e-7 K here
    _, env = make_setup()
    t_star = 4 * math.pi**2 * HBAR**2 / (2 * M_ENV * CONSTANTS.k_B * 1e-10)
    assert 1e-8 < t_star < 1e-6
    below = EnvironmentSpec(env.species, t_star / 200, env.n)
    above = EnvironmentSpec(env.species, t_star * 200, env.n)
    assert classify_regime(below, SuperpositionSpec(1e-5)) is Regime.LONG
    assert classify_regime(above, SuperpositionSpec(1e-5)) is Regime.SHORT


# ---------------------------------------------------------------- decay


def test_off_diagonal_decay():
    assert off_diagonal_decay(0.5 + 0.5j, 1e-2, 0.0) == 0.5 + 0.5j
    assert off_diagonal_decay(1.0, 1e-2, 1.0) == pytest.approx(math.exp(-0.01), rel=1e-15)
    assert off_diagonal_decay(1.0, 1e-2, 1.0) == pytest.approx(0.99005, abs=1e-5)
    assert off_diagonal_decay(1.0, 1.0, 1e4) == 0.0
    with pytest.raises(DomainError):
        off_diagonal_decay(1.0, -1.0, 1.0)


@given(st.floats(0, 10), st.floats(0, 10))
def test_decay_is_monotone(g, t):
    assert off_diagonal_decay(1.0, g, t + 1.0) <= off_diagonal_decay(1.0, g, t)


def test_density_matrix_keeps_diagonal():
    rho = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    out = decay_density_matrix(rho, 2.0, 1.0)
    assert np.allclose(np.diag(out), [0.5, 0.5])
    assert out[0, 1] == pytest.approx(0.5 * math.exp(-2.0))


def test_rate_result_invariants():
    r = RateResult(4.0, Regime.SHORT)
    assert r.coherence_time * r.gamma == 1.0
    with pytest.raises(DomainError):
        RateResult(-1.0, Regime.SHORT)


def test_long_rate_thermal_average_large_radius():
    # sigma_eff ripples with period pi hbar / 2R in p; compare against the smooth
    # large-a asymptote averaged independently
    from scipy import integrate

    from dipole_decoherence.special import EULER_GAMMA, momentum_pdf

    ctx, env = make_setup(1e-30, 1e-29, 1e-27, 1e-6, 1.0, 1e8)
    sup = SuperpositionSpec(1e-11)
    mb = MomentumDistribution.maxwell_boltzmann(1e-27, 1.0)
    hbar = CONSTANTS.hbar

    def smooth(p):
        a = 2.0 * ctx.R * p / hbar
        sigma = 16.0 / 9.0 * ctx.coupling_area * (math.log(4 * a * a) + 2 * (EULER_GAMMA - 1)) / a**4
        return momentum_pdf(mb, p) * env.n * p / ctx.m * (p * sup.delta_x / hbar) ** 2 * sigma

    w = mb.width
    oracle, _ = integrate.quad(smooth, 0.05 * w, 12 * w, epsabs=0, epsrel=1e-12, limit=200)
    got = gamma_long(ctx, env, sup, mb).gamma
    assert got == pytest.approx(RATE_PREFACTOR * oracle, rel=1e-5)
