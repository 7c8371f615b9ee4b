"""Ground-state window statistics and post-measurement moments."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtr

from qlab import (
    WindowEvent,
    build_chain,
    conditional_moments,
    deviation_profile,
    posterior_density_curve,
    spectral_decompose,
    vacuum_covariance,
    window_probability,
)
from oracles import conditioned_second_moment_2d, gauss_window_mass

# second moment of site 1 given |x_0| <= 0.1 on the coupled pair, frozen
# from the adaptive 2-d quadrature oracle before the implementation existed
PAIR_M2_SITE1 = 0.3662639181320512
# relative second-moment deviation at site 1 implied by the same oracle
PAIR_REL_DEV_SITE1 = 0.07119192157561346


def sigma_of(s, site):
    return math.sqrt(s.omega_inv[site, site] / 2.0)


def test_symmetric_window_closed_form(pair):
    w = WindowEvent(0, -0.25, 0.25)
    sigma = sigma_of(pair, 0)
    assert window_probability(pair, w) == pytest.approx(
        2.0 * ndtr(0.25 / sigma) - 1.0, abs=1e-14
    )


def test_window_probability_quadrature_oracle(pair):
    sigma = sigma_of(pair, 0)
    for lo, hi in [(-0.1, 0.1), (0.3, 1.7), (-2.0, 0.5)]:
        assert window_probability(pair, WindowEvent(0, lo, hi)) == pytest.approx(
            gauss_window_mass(sigma, lo, hi), rel=1e-10
        )


def test_window_probability_total_mass(pair):
    sigma = sigma_of(pair, 0)
    w = WindowEvent(0, -10.0 * sigma, 10.0 * sigma)
    assert window_probability(pair, w) == pytest.approx(1.0, abs=1e-12)


def test_far_tail_window_is_positive_and_accurate(pair):
    # the direct cumulative difference would round to zero at this distance
    sigma = sigma_of(pair, 0)
    value = window_probability(pair, WindowEvent(0, 7.0, 8.0))
    assert 0.0 < value < 1e-20
    assert value == pytest.approx(
        (ndtr(-7.0 / sigma) - ndtr(-8.0 / sigma)), rel=1e-6
    )


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-3, 3, allow_nan=False),
    st.floats(0.05, 4.0, allow_nan=False),
)
def test_window_probability_in_unit_interval(center, width):
    s = spectral_decompose(build_chain(3, 1.0, 1.0))
    value = window_probability(s, WindowEvent(1, center - width, center + width))
    assert 0.0 < value < 1.0


def test_window_validation(pair):
    with pytest.raises(ValueError):
        WindowEvent(0, 1.0, 1.0)
    with pytest.raises(ValueError):
        WindowEvent(-1, 0.0, 1.0)
    with pytest.raises(ValueError):
        window_probability(pair, WindowEvent(5, -1.0, 1.0))


def test_uncoupled_targets_keep_vacuum_moments(diag_control):
    w = WindowEvent(0, -0.3, 0.8)
    mean, second = conditional_moments(diag_control, w, 1)
    cov = vacuum_covariance(diag_control).sigma_q
    assert mean == 0.0
    assert second == pytest.approx(cov[1, 1], abs=1e-15)


def test_symmetric_window_zero_means(pair):
    w = WindowEvent(0, -0.1, 0.1)
    for target in range(2):
        mean, _ = conditional_moments(pair, w, target)
        assert mean == pytest.approx(0.0, abs=1e-15)


def test_conditional_second_moment_matches_quadrature_oracle(pair):
    w = WindowEvent(0, -0.1, 0.1)
    _, second = conditional_moments(pair, w, 1)
    assert second == pytest.approx(PAIR_M2_SITE1, abs=1e-9)
    cov = vacuum_covariance(pair).sigma_q
    live = conditioned_second_moment_2d(cov, -0.1, 0.1, target=1, site=0)
    assert second == pytest.approx(live, abs=1e-9)
    # conditioning through the narrow window shrinks the second moment
    assert second < cov[1, 1]


def test_conditional_moments_at_measured_site(pair):
    w = WindowEvent(0, -0.1, 0.1)
    _, second = conditional_moments(pair, w, 0)
    cov = vacuum_covariance(pair).sigma_q
    live = conditioned_second_moment_2d(cov, -0.1, 0.1, target=0, site=0)
    assert second == pytest.approx(live, rel=1e-9)
    # nearly uniform over the narrow window: close to width^2 / 12
    assert second == pytest.approx(0.1**2 / 3.0, rel=0.01)


def test_asymmetric_window_mean_sign(pair):
    w = WindowEvent(0, 0.0, 0.6)
    mean0, _ = conditional_moments(pair, w, 0)
    mean1, _ = conditional_moments(pair, w, 1)
    assert mean0 > 0.0
    # negative ground-state correlation pulls the neighbour the other way
    assert mean1 < 0.0


def test_wide_window_restores_vacuum_moments(pair):
    sigma = sigma_of(pair, 0)
    w = WindowEvent(0, -10.0 * sigma, 10.0 * sigma)
    cov = vacuum_covariance(pair).sigma_q
    for target in range(2):
        mean, second = conditional_moments(pair, w, target)
        assert mean == pytest.approx(0.0, abs=1e-10)
        assert second == pytest.approx(cov[target, target], abs=1e-10)


def test_far_tail_conditional_moments_stable(pair):
    w = WindowEvent(0, 7.0, 8.0)
    mean, second = conditional_moments(pair, w, 0)
    assert 7.0 < mean < 8.0
    assert 49.0 < second < 64.0
    assert math.isfinite(conditional_moments(pair, w, 1)[1])


def test_deviation_profile_uncoupled(diag_control):
    profile = dict(deviation_profile(diag_control, WindowEvent(0, -0.1, 0.1)))
    assert profile[1] <= 1e-14
    assert profile[0] > 0.1


def test_deviation_profile_coupled_pair(pair):
    profile = dict(deviation_profile(pair, WindowEvent(0, -0.1, 0.1)))
    assert profile[1] == pytest.approx(PAIR_REL_DEV_SITE1, abs=1e-9)
    assert profile[0] > 0.0 and profile[1] > 1e-3


def test_deviation_profile_chain_decays_but_never_vanishes():
    s = spectral_decompose(build_chain(8, 1.0, 1.0))
    profile = dict(deviation_profile(s, WindowEvent(0, -0.1, 0.1)))
    values = [profile[t] for t in range(1, 8)]
    assert all(v > 0.0 for v in values)
    assert profile[7] > 0.0
    for nearer, farther in zip(values, values[1:]):
        assert farther < nearer
    # decay tracks the squared inverse-operator column, measured not assumed
    assert values[0] / values[-1] > 1e2


def test_posterior_density_curve_normalizes(pair):
    w = WindowEvent(0, -0.1, 0.1)
    xs = np.linspace(-4.0, 4.0, 3001)
    dens = posterior_density_curve(pair, w, 1, xs)
    mass = np.trapezoid(dens, xs)
    second = np.trapezoid(xs**2 * dens, xs)
    assert mass == pytest.approx(1.0, abs=1e-6)
    assert second == pytest.approx(PAIR_M2_SITE1, abs=1e-6)


def test_posterior_density_curve_measured_site(pair):
    w = WindowEvent(0, -0.1, 0.1)
    xs = np.linspace(-0.2, 0.2, 4001)
    dens = posterior_density_curve(pair, w, 0, xs)
    assert np.all(dens[(xs < w.lo) | (xs > w.hi)] == 0.0)
    # trapezoids across the sharp window edges cap the achievable accuracy
    assert np.trapezoid(dens, xs) == pytest.approx(1.0, abs=2e-3)
