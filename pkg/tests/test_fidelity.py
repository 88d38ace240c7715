import math

import numpy as np
import pytest
from hypothesis import assume, given, settings

from errors import DomainError, InvalidParameter, NonPhysicalState
from fidelity import (PsiMarker, coupling_function, displaced_threshold, fidelity_below, fidelity_min_over_psi,
                      fidelity_threshold, g_products, gamma_factor, gaussian_fidelity, psi_threshold,
                      threshold_report)
from gaussian_core import GaussianParams, SingleModeState, coherent, squeezed, state_from_params, thermal, vacuum
from oracles import (SQUEEZED_THERMAL_1, SQUEEZED_THERMAL_2, coherent_overlap, gaussian_params, minimize_over_psi, photons,
                     purities, random_parameter_sets, squeezed_overlap_fidelity, squeezings, taus)

MU1, MU2 = SQUEEZED_THERMAL_1.mu, SQUEEZED_THERMAL_2.mu


def fidelity_at(p1, p2, psi):
    return gaussian_fidelity(state_from_params(p1), state_from_params(p2.with_psi(psi))).fidelity


@given(gaussian_params(with_mean=True))
@settings(deadline=None, max_examples=200)
def test_self_fidelity_is_one(p):
    s = state_from_params(p)
    b = gaussian_fidelity(s, s)
    assert b.gamma_factor == 1.0
    assert b.fidelity == pytest.approx(1.0, abs=1e-12)
    assert math.sqrt(b.delta_cap + b.delta_small) - math.sqrt(b.delta_small) == pytest.approx(1.0, abs=1e-9)


def test_vacuum_against_thermal():
    b = gaussian_fidelity(state_from_params(vacuum()), state_from_params(thermal(1.0)))
    assert b.fidelity == pytest.approx(0.5, abs=1e-15)
    assert b.delta_cap == pytest.approx(4.0)
    assert b.delta_small == 0.0


@pytest.mark.parametrize("n_th", [0.1, 0.5, 2.0])
def test_vacuum_against_thermal_scalar_formula(n_th):
    mu = 1 / (1 + 2 * n_th)
    f = gaussian_fidelity(state_from_params(vacuum()), state_from_params(thermal(n_th))).fidelity
    assert f == pytest.approx(2 * mu / (1 + mu), rel=1e-14)
    assert f == pytest.approx(1 / (1 + n_th), rel=1e-14)


def test_coherent_states():
    b = gaussian_fidelity(state_from_params(coherent(1.0)), state_from_params(vacuum()))
    assert b.fidelity == pytest.approx(math.exp(-1), rel=1e-14)
    assert b.fidelity == pytest.approx(coherent_overlap(1.0, 0.0), rel=1e-14)
    assert list(b.mean_diff) == pytest.approx([math.sqrt(2.0), 0.0])
    assert b.to_dict()['gamma_factor'] == pytest.approx(math.exp(-1))


@given(gaussian_params(with_mean=True), gaussian_params(with_mean=True))
@settings(deadline=None, max_examples=300)
def test_fidelity_is_symmetric_and_bounded(p1, p2):
    s1, s2 = state_from_params(p1), state_from_params(p2)
    f12 = gaussian_fidelity(s1, s2)
    f21 = gaussian_fidelity(s2, s1)
    assert f12.fidelity == pytest.approx(f21.fidelity, rel=1e-12)
    assert 0.0 < f12.fidelity <= 1.0 + 1e-12
    assert f12.delta_cap > 0 and f12.delta_small >= 0
    assert 0.0 < f12.gamma_factor <= 1.0


def test_degenerate_covariance_never_reaches_fidelity():
    with pytest.raises(NonPhysicalState):
        SingleModeState(mean=[1.0, 0.0], cm=np.zeros((2, 2)))


def test_coupling_function_pure():
    for tau in np.linspace(0.01, 0.99, 25):
        assert coupling_function(1.0, 1.0, tau) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.9, 1.0])
def test_coupling_function_balanced(mu):
    value = coupling_function(mu, mu, 0.5)
    assert value == pytest.approx((1 + mu ** 4) / (2 * mu ** 2), rel=1e-14)
    assert value >= 1.0


def test_coupling_function_squeezed_thermal():
    m = 1 / (1.4 * 1.6)
    expected = (1 + m * m) / (8 * m * 0.25)
    assert coupling_function(MU1, MU2, 0.5) == pytest.approx(expected, rel=1e-13)
    assert coupling_function(MU1, MU2, 0.5) == pytest.approx(1.343214285714, rel=1e-11)


@pytest.mark.parametrize("func", [
    lambda tau: coupling_function(0.5, 0.5, tau),
    lambda tau: fidelity_threshold(0.5, 0.5, tau),
    lambda tau: psi_threshold(0.1, 0.2, 0.5, 0.5, tau),
])
def test_endpoints_are_a_domain_error(func):
    for tau in (0.0, 1.0):
        with pytest.raises(DomainError):
            func(tau)
    with pytest.raises(InvalidParameter):
        func(1.5)


def test_psi_threshold_identical_pure_squeezing():
    for r in (0.1, 0.7, 1.5):
        assert psi_threshold(r, r, 1.0, 1.0, 0.3) == pytest.approx(0.0, abs=1e-6)


def test_psi_threshold_thermal_inputs_never_entangle():
    assert psi_threshold(0.0, 0.0, MU1, MU2, 0.5) is PsiMarker.NEVER_ENTANGLED
    assert psi_threshold(0.0, 0.0, 1.0, 1.0, 0.5) is PsiMarker.NEVER_ENTANGLED


def test_psi_threshold_markers():
    # 不同的纯压缩真空：任何相位都纠缠
    assert psi_threshold(1.0, 0.5, 1.0, 1.0, 0.5) is PsiMarker.ALWAYS_ENTANGLED
    assert psi_threshold(0.2, 0.0, 1.0, 1.0, 0.1) is PsiMarker.ALWAYS_ENTANGLED
    # 高度混合、轻微压缩：没有纠缠
    assert psi_threshold(0.1, 0.1, 0.2, 0.2, 0.5) is PsiMarker.NEVER_ENTANGLED


def test_psi_threshold_squeezed_thermal_ordering():
    psi_05 = psi_threshold(0.5, 0.7, MU1, MU2, 0.5)
    psi_08 = psi_threshold(0.5, 0.7, MU1, MU2, 0.8)
    assert isinstance(psi_05, float) and isinstance(psi_08, float)
    assert 0.0 < psi_05 < psi_08 < math.pi


@pytest.mark.parametrize("tau", [0.5, 0.8])
def test_fidelity_at_critical_phase_equals_threshold_squeezed_thermal(tau):
    psi_e = psi_threshold(0.5, 0.7, MU1, MU2, tau)
    f_e = fidelity_threshold(MU1, MU2, tau).f_e
    assert fidelity_at(SQUEEZED_THERMAL_1, SQUEEZED_THERMAL_2, psi_e) == pytest.approx(f_e, abs=1e-9)


@given(squeezings, squeezings, photons, photons, taus)
@settings(deadline=None, max_examples=300)
def test_fidelity_at_critical_phase_equals_threshold(r1, r2, n1, n2, tau):
    p1, p2 = GaussianParams(r=r1, n_th=n1), GaussianParams(r=r2, n_th=n2)
    psi_e = psi_threshold(r1, r2, p1.mu, p2.mu, tau)
    assume(isinstance(psi_e, float))
    f_e = fidelity_threshold(p1.mu, p2.mu, tau).f_e
    assert fidelity_at(p1, p2, psi_e) == pytest.approx(f_e, abs=1e-9)


def test_threshold_pure_inputs_is_one():
    for tau in np.linspace(0.0, 1.0, 102)[1:-1]:
        assert fidelity_threshold(1.0, 1.0, tau).f_e == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.77, 1.0])
def test_threshold_one_pure_input(mu):
    expected = math.sqrt(2) * mu / math.sqrt(1 + mu * mu)
    for tau in (0.05, 0.3, 0.5, 0.91):
        assert fidelity_threshold(mu, 1.0, tau).f_e == pytest.approx(expected, abs=1e-12)
        assert fidelity_threshold(1.0, mu, tau).f_e == pytest.approx(expected, abs=1e-12)
    assert fidelity_threshold(0.5, 1.0, 0.3).f_e == pytest.approx(0.632456, abs=1e-6)


@given(purities, purities, taus)
@settings(deadline=None, max_examples=300)
def test_threshold_symmetries(mu1, mu2, tau):
    report = fidelity_threshold(mu1, mu2, tau)
    assert fidelity_threshold(mu2, mu1, tau).f_e == pytest.approx(report.f_e, abs=1e-12)
    assert fidelity_threshold(mu1, mu2, 1.0 - tau).f_e == pytest.approx(report.f_e, abs=1e-12)
    assert 0.0 < report.f_e <= 1.0 + 1e-12
    assert 0.0 <= report.g_minus < 1.0
    assert 1.0 < report.g_plus <= 4.0


def test_g_products():
    assert g_products(1.0, 1.0) == (0.0, 4.0)
    assert g_products(0.5, 0.5) == pytest.approx((0.5625, 1.5625))


def test_threshold_does_not_read_squeezing():
    reports = [threshold_report(r1, r2, MU1, MU2, 0.5) for r1, r2 in ((0.0, 0.0), (0.5, 0.7), (2.0, 1.3))]
    assert len({r.f_e for r in reports}) == 1
    assert reports[0].f_e == fidelity_threshold(MU1, MU2, 0.5).f_e


def test_fidelity_min_of_thermals():
    mu1, mu2 = 0.8, 0.3
    f_min = fidelity_min_over_psi(0.0, 0.0, mu1, mu2)
    expected = 2 * mu1 * mu2 / (1 + mu1 * mu2 - math.sqrt((1 - mu1 ** 2) * (1 - mu2 ** 2)))
    assert f_min == pytest.approx(expected, rel=1e-13)
    n1, n2 = (1 / mu1 - 1) / 2, (1 / mu2 - 1) / 2
    direct = gaussian_fidelity(state_from_params(thermal(n1)), state_from_params(thermal(n2))).fidelity
    assert f_min == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("r1, r2", [(0.1, 0.2), (0.5, 0.7), (1.2, 0.4)])
def test_fidelity_min_of_pure_squeezed(r1, r2):
    assert fidelity_min_over_psi(r1, r2, 1.0, 1.0) == pytest.approx(squeezed_overlap_fidelity(r1, r2), rel=1e-12)
    direct = gaussian_fidelity(state_from_params(squeezed(r1, 0.0)), state_from_params(squeezed(r2, math.pi)))
    assert direct.fidelity == pytest.approx(squeezed_overlap_fidelity(r1, r2), rel=1e-10)


@given(squeezings, squeezings, photons, photons)
@settings(deadline=None, max_examples=300)
def test_fidelity_min_is_value_at_opposite_phase(r1, r2, n1, n2):
    p1, p2 = GaussianParams(r=r1, n_th=n1), GaussianParams(r=r2, n_th=n2)
    f_min = fidelity_min_over_psi(r1, r2, p1.mu, p2.mu)
    assert fidelity_at(p1, p2, math.pi) == pytest.approx(f_min, abs=1e-10)


def test_fidelity_min_squeezed_thermal_matches_grid_minimum():
    value, location = minimize_over_psi(lambda psi: fidelity_at(SQUEEZED_THERMAL_1, SQUEEZED_THERMAL_2, psi))
    assert fidelity_min_over_psi(0.5, 0.7, MU1, MU2) == pytest.approx(value, abs=1e-8)
    assert location == pytest.approx(math.pi, abs=1e-4)


@given(squeezings, squeezings, photons, photons)
@settings(deadline=None, max_examples=60)
def test_fidelity_profile_shape(r1, r2, n1, n2):
    p1, p2 = GaussianParams(r=r1, n_th=n1), GaussianParams(r=r2, n_th=n2)
    values = np.array([fidelity_at(p1, p2, psi) for psi in np.linspace(0.0, math.pi, 1000)])
    assert np.all(np.diff(values) <= 1e-12)
    for psi in (0.4, 2.2):
        assert fidelity_at(p1, p2, psi) == pytest.approx(fidelity_at(p1, p2, 2 * math.pi - psi), abs=1e-12)
    value, _ = minimize_over_psi(lambda psi: fidelity_at(p1, p2, psi), n_grid=401)
    assert fidelity_min_over_psi(r1, r2, p1.mu, p2.mu) == pytest.approx(value, abs=1e-8)


def test_displaced_threshold_equal_means():
    s1 = state_from_params(GaussianParams(alpha_re=0.3, r=0.5, n_th=0.2))
    s2 = state_from_params(GaussianParams(alpha_re=0.3, r=0.7, psi=2.0, n_th=0.3))
    assert displaced_threshold(s1, s2, 0.5) == pytest.approx(fidelity_threshold(MU1, MU2, 0.5).f_e, rel=1e-12)
    assert gamma_factor(s1, s2) == 1.0


@given(gaussian_params(with_mean=True), gaussian_params(with_mean=True), taus)
@settings(deadline=None, max_examples=200)
def test_gamma_factor_range(p1, p2, tau):
    s1, s2 = state_from_params(p1), state_from_params(p2)
    g = gamma_factor(s1, s2)
    assert 0.0 < g <= 1.0
    if np.array_equal(s1.mean, s2.mean):
        assert g == 1.0
    else:
        assert g < 1.0 or np.linalg.norm(s1.mean - s2.mean) < 1e-7
    assert displaced_threshold(s1, s2, tau) == pytest.approx(
        g * fidelity_threshold(p1.mu, p2.mu, tau).f_e, rel=1e-9)


def test_threshold_report_squeezed_thermal():
    report = threshold_report(0.5, 0.7, MU1, MU2, 0.5)
    assert report.entangled_at_minimum is True
    assert report.fidelity_below_at_minimum is True
    assert report.gamma_condition is True
    lo, hi = report.entangled_interval
    assert lo == report.psi_e and hi == pytest.approx(2 * math.pi - report.psi_e)
    data = report.to_dict()
    assert data['psi_e'] == report.psi_e
    assert data['f_e'] == report.f_e


def test_threshold_report_thermal_inputs():
    report = threshold_report(0.0, 0.0, MU1, MU2, 0.5)
    assert report.psi_e is PsiMarker.NEVER_ENTANGLED
    assert report.entangled_interval is None
    assert report.entangled_at_minimum is False
    assert report.fidelity_below_at_minimum is False
    assert report.gamma_condition is False
    assert report.to_dict()['psi_e'] == 'never-entangled'


@given(squeezings, squeezings, photons, photons, taus)
@settings(deadline=None, max_examples=500)
def test_minimum_verdicts_agree(r1, r2, n1, n2, tau):
    p1, p2 = GaussianParams(r=r1, n_th=n1), GaussianParams(r=r2, n_th=n2)
    report = threshold_report(r1, r2, p1.mu, p2.mu, tau)
    assume(abs(report.lambda_min - 0.5) > 1e-8)
    assume(abs(report.gamma_proof - report.gamma_bound) > 1e-8)
    assert report.entangled_at_minimum == report.gamma_condition
    assert report.fidelity_below_at_minimum == report.entangled_at_minimum


def test_fidelity_below_tie():
    assert not fidelity_below(1.0, 1.0)
    assert not fidelity_below(1.0 - 1e-15, 1.0)
    assert fidelity_below(0.9, 1.0)


@pytest.mark.slow
def test_fidelity_closed_forms_full_size():
    for p1, p2, tau in random_parameter_sets(10000, seed=20110520):
        s1 = state_from_params(p1)
        value, _ = minimize_over_psi(
            lambda psi: gaussian_fidelity(s1, state_from_params(p2.with_psi(psi))).fidelity, n_grid=33)
        assert fidelity_min_over_psi(p1.r, p2.r, p1.mu, p2.mu) == pytest.approx(value, abs=1e-8)
        psi_e = psi_threshold(p1.r, p2.r, p1.mu, p2.mu, tau)
        if isinstance(psi_e, float):
            f_e = fidelity_threshold(p1.mu, p2.mu, tau).f_e
            assert fidelity_at(p1, p2, psi_e) == pytest.approx(f_e, abs=1e-9)
