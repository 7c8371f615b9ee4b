"""Truncated Fock space: operator matrices, oracles, spans, projections."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qlab import (
    ComplexMode,
    DimensionCapExceededError,
    LocalPolynomial,
    Region,
    WindowEvent,
    ZeroOperatorError,
    build_custom,
    build_fock,
    cyclicity_residuals,
    one_quantum_state,
    random_local_polynomial,
    separability_check,
    spectral_decompose,
    vacuum_covariance,
    vacuum_weyl_oracle,
    weyl_matrix,
    window_probability,
)
from qlab.fock import _monomial_exponents
from oracles import dense_weyl, exp_series


@pytest.fixture(scope="module")
def single_mode():
    return spectral_decompose(build_custom([[4.0]]))


def test_single_mode_ladder_example(single_mode):
    f = build_fock(single_mode, 2)
    assert_allclose(f.site_q[0], [[0.0, 0.5], [0.5, 0.0]], atol=1e-15)
    assert_allclose(np.diag(f.hamiltonian), [0.0, 2.0], atol=1e-15)


def test_hamiltonian_annihilates_vacuum(pair):
    f = build_fock(pair, 5)
    assert np.linalg.norm(f.hamiltonian @ f.vacuum) == 0.0


def test_site_operators_self_adjoint(pair):
    f = build_fock(pair, 6)
    for op in (*f.site_q, *f.site_p):
        assert np.max(np.abs(op - op.conj().T)) <= 1e-12


def test_commutators_away_from_truncation_edge(pair):
    f = build_fock(pair, 6)
    for j in range(2):
        for k in range(2):
            comm = f.site_q[j] @ f.site_p[k] - f.site_p[k] @ f.site_q[j]
            expected = 1j if j == k else 0.0
            for index in range(f.dimension):
                if f.max_level(index) > f.truncation - 2:
                    continue
                e = np.zeros(f.dimension)
                e[index] = 1.0
                assert abs(e @ (comm @ e) - expected) <= 1e-10


def test_vacuum_covariances_match_closed_form(pair):
    f = build_fock(pair, 3)
    cov = vacuum_covariance(pair)
    for i in range(2):
        for j in range(2):
            qq = f.vacuum @ (f.site_q[i] @ (f.site_q[j] @ f.vacuum))
            pp = f.vacuum @ (f.site_p[i] @ (f.site_p[j] @ f.vacuum))
            assert qq == pytest.approx(cov.sigma_q[i, j], abs=1e-10)
            assert pp == pytest.approx(cov.sigma_p[i, j], abs=1e-10)
    qq01 = f.vacuum @ (f.site_q[0] @ (f.site_q[1] @ f.vacuum))
    assert qq01 == pytest.approx(-0.105662, abs=1e-6)


def test_weyl_identity_at_zero(pair):
    f = build_fock(pair, 8)
    assert_allclose(
        weyl_matrix(f, ComplexMode(np.zeros(2, dtype=complex))),
        np.eye(f.dimension),
        atol=1e-14,
    )


def test_weyl_vacuum_expectation_against_series(single_mode):
    f = build_fock(single_mode, 30)
    xi = ComplexMode(np.array([1.0 + 0j]))
    value = vacuum_weyl_oracle(f, xi)
    assert abs(value - exp_series(-0.5)) < 1e-8
    assert abs(value - 0.606531) < 1e-6


def test_weyl_two_mode_vacuum_expectation_against_series(pair, fock_pair_30):
    xi = ComplexMode(np.array([0.5, 0.3 - 0.55j]))
    value = vacuum_weyl_oracle(fock_pair_30, xi)
    assert abs(value - exp_series(-0.5 * xi.norm**2)) < 1e-8


def test_weyl_unitary_on_interior_levels(single_mode):
    f = build_fock(single_mode, 30)
    w = weyl_matrix(f, ComplexMode(np.array([1.0 + 0j])))
    product = w.conj().T @ w
    keep = [i for i in range(f.dimension) if f.max_level(i) <= f.truncation // 2]
    block = product[np.ix_(keep, keep)] - np.eye(len(keep))
    assert np.linalg.norm(block, 2) < 1e-8


def test_weyl_factorization_matches_dense_exponential(pair):
    # independent oracle: expm of the full summed generator
    f = build_fock(pair, 8)
    rng = np.random.default_rng(5)
    xi = 0.4 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    assert_allclose(
        weyl_matrix(f, ComplexMode(xi)),
        dense_weyl(f.mode_matrix, 8, xi),
        atol=1e-12,
    )


def test_weyl_warns_on_large_displacement(pair):
    f = build_fock(pair, 8)
    with pytest.warns(UserWarning, match="displacement norm"):
        weyl_matrix(f, ComplexMode(np.array([1.0, 1.0], dtype=complex)))


def test_dimension_cap_enforced(pair):
    with pytest.raises(DimensionCapExceededError):
        build_fock(pair, 150)  # 150^2 > 20000


def test_one_quantum_state_is_creation_on_vacuum(pair, fock_pair_30):
    rng = np.random.default_rng(8)
    xi = rng.normal(size=2) + 1j * rng.normal(size=2)
    xi /= np.linalg.norm(xi)
    state = one_quantum_state(fock_pair_30, ComplexMode(xi))
    assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)
    # orthogonal to the vacuum and supported on single-excitation states
    assert abs(state @ fock_pair_30.vacuum) == 0.0
    occupied = [i for i in range(fock_pair_30.dimension) if abs(state[i]) > 0]
    assert all(sum(fock_pair_30.occupations(i)) == 1 for i in occupied)


def test_monomial_enumeration_counts():
    assert len(_monomial_exponents((0,), 8)) == 45
    assert len(_monomial_exponents((0, 1), 2)) == 15


def test_cyclicity_vacuum_in_degree_zero_span(pair):
    f = build_fock(pair, 6)
    residuals = dict(cyclicity_residuals(f, Region(2, (0,)), 0))
    assert residuals["|0,0>"] == pytest.approx(0.0, abs=1e-12)
    # every other basis state is orthogonal to the vacuum span
    assert residuals["|0,1>"] == pytest.approx(1.0, abs=1e-12)


def test_cyclicity_uncoupled_cross_factor_stays_one(diag_control):
    f = build_fock(diag_control, 8)
    for degree in range(5):
        residuals = dict(cyclicity_residuals(f, Region(2, (0,)), degree))
        assert residuals["|0,1>"] == pytest.approx(1.0, abs=1e-12)


def test_cyclicity_coupled_residual_decays(pair):
    f = build_fock(pair, 12)
    trajectory = []
    for degree in range(9):
        residuals = dict(cyclicity_residuals(f, Region(2, (0,)), degree))
        trajectory.append(residuals["|0,1>"])
    assert trajectory[0] == pytest.approx(1.0, abs=1e-12)
    assert min(trajectory) < 0.1
    for earlier, later in zip(trajectory, trajectory[1:]):
        assert later <= earlier + 1e-12


def test_cyclicity_rejects_bad_region(pair):
    f = build_fock(pair, 4)
    with pytest.raises(Exception):
        cyclicity_residuals(f, Region(2, ()), 2)


def test_separability_identity_and_site_operator(pair):
    f = build_fock(pair, 8)
    b = Region(2, (0,))
    identity = LocalPolynomial(((1.0, ()),))
    assert separability_check(f, b, identity) == pytest.approx(1.0, abs=1e-12)
    q0 = LocalPolynomial(((1.0, ((0, "Q"),)),))
    assert separability_check(f, b, q0) == pytest.approx(
        np.sqrt(vacuum_covariance(pair).sigma_q[0, 0]), abs=1e-10
    )
    assert separability_check(f, b, q0) == pytest.approx(np.sqrt(0.394338), abs=1e-6)


def test_separability_zero_and_offsite_rejected(pair):
    f = build_fock(pair, 4)
    b = Region(2, (0,))
    with pytest.raises(ZeroOperatorError):
        separability_check(f, b, LocalPolynomial(((0.0, ()),)))
    with pytest.raises(ValueError):
        separability_check(f, b, LocalPolynomial(((1.0, ((1, "Q"),)),)))
    with pytest.raises(ValueError):
        separability_check(f, b, WindowEvent(1, -1.0, 1.0))


def test_separability_random_corpus_positive(pair):
    f = build_fock(pair, 12)
    b = Region(2, (0,))
    rng = np.random.default_rng(99)
    for _ in range(30):
        poly = random_local_polynomial(b, 3, rng)
        assert separability_check(f, b, poly) > 1e-12


def test_separability_window_matches_probability(pair, fock_pair_40):
    # window edges sit where the discrete spectral density is low, which is
    # where the sharp-window projector of the truncated operator is accurate
    window = WindowEvent(0, -2.0, 2.0)
    projected = separability_check(fock_pair_40, Region(2, (0,)), window)
    assert projected**2 == pytest.approx(window_probability(pair, window), abs=1e-4)


def test_occupation_labels_roundtrip(pair):
    f = build_fock(pair, 5)
    for index in (0, 1, 7, 24):
        occ = f.occupations(index)
        assert f.basis_index(occ) == index
    assert f.basis_label(1) == "|0,1>"


@pytest.mark.filterwarnings("ignore:displacement norm")
def test_three_mode_space_covariances_and_weyl():
    # exercises the tensor embedding beyond two modes
    from qlab import build_chain, spectral_decompose

    s = spectral_decompose(build_chain(3, 1.0, 1.0))
    f = build_fock(s, 6)
    assert f.dimension == 216
    assert f.occupations(1) == (0, 0, 1)
    assert f.occupations(6) == (0, 1, 0)
    assert f.occupations(36) == (1, 0, 0)
    cov_q = vacuum_covariance(s).sigma_q
    cov_p = vacuum_covariance(s).sigma_p
    for i in range(3):
        for j in range(3):
            qq = f.vacuum @ (f.site_q[i] @ (f.site_q[j] @ f.vacuum))
            pp = f.vacuum @ (f.site_p[i] @ (f.site_p[j] @ f.vacuum))
            assert qq == pytest.approx(cov_q[i, j], abs=1e-10)
            assert pp == pytest.approx(cov_p[i, j], abs=1e-10)
    rng = np.random.default_rng(12)
    xi = 0.3 * (rng.normal(size=3) + 1j * rng.normal(size=3))
    assert_allclose(
        weyl_matrix(f, ComplexMode(xi)),
        dense_weyl(f.mode_matrix, 6, xi),
        atol=1e-12,
    )
    value = vacuum_weyl_oracle(f, ComplexMode(xi))
    assert abs(value - exp_series(-0.5 * float(np.linalg.norm(xi)) ** 2)) < 1e-6
