from fractions import Fraction

import pytest

from affwalk.modules import build_free_module, regular_module
from affwalk.rings import build_product, build_zn
from affwalk.spectrum import SpectrumItem, SpectrumReport, predicted_spectrum
from affwalk.verify import (
    DimensionMismatch,
    characteristic_polynomial,
    cross_check_duality,
    exact_power_traces,
    is_stationary,
    newton_power_sums,
    stationary_distribution,
    verify_power_sums,
)
from affwalk.walks import (
    Affine,
    CoinToss,
    Distribution,
    Polynomial,
    WalkSpec,
    affine_matrix,
    coin_toss_matrix,
    walk_matrix,
)

from conftest import F, dist


def test_newton_identities_small():
    # roots 1, 2, 3: x^3 - 6x^2 + 11x - 6
    assert newton_power_sums([F(1), F(-6), F(11), F(-6)], 4) == [6, 14, 36, 98]


def test_traces_agree_between_methods(z4_example):
    V, P, Q = z4_example
    A = affine_matrix(P, Q)
    assert exact_power_traces(A, method="charpoly") == exact_power_traces(A, method="powers")
    cp = characteristic_polynomial(A)
    assert cp[0] == 1 and len(cp) == 5


def test_z4_affine_passes(z4_example):
    V, P, Q = z4_example
    spec = WalkSpec(Affine(), P, Q)
    rep = verify_power_sums(walk_matrix(spec), predicted_spectrum(spec), tol=1e-8)
    assert rep.passed and rep.max_residual < 1e-9
    assert rep.char_poly_match
    assert len(rep.power_sum_residuals) == 4


def test_perturbed_spectrum_fails(z4_example):
    V, P, Q = z4_example
    spec = WalkSpec(Affine(), P, Q)
    S = predicted_spectrum(spec)
    for i in range(len(S.items)):
        rep = verify_power_sums(walk_matrix(spec), S.perturbed(0.01, i))
        assert not rep.passed and rep.max_residual >= 0.0099


def test_identity_walk():
    R = build_zn(6)
    V = build_free_module(R, 2)
    spec = WalkSpec(CoinToss(F(0)), Distribution.uniform(V), Distribution.point_mass(R, 1))
    A = walk_matrix(spec)
    assert [t for t, _ in exact_power_traces(A)] == [36] * 36
    assert verify_power_sums(A, predicted_spectrum(spec)).passed


def test_complex_polynomial_walk(z4_example):
    V, P, Q = z4_example
    spec = WalkSpec(Polynomial.from_mapping({(1, 0): (1, 2), (1, 1): (0, -1), (0, 0): "1/3"}), P, Q)
    A = walk_matrix(spec)
    assert A.imag is not None
    rep = verify_power_sums(A, predicted_spectrum(spec))
    assert rep.passed and rep.stationary is None


def test_dimension_mismatch(z4_example):
    V, P, Q = z4_example
    A = affine_matrix(P, Q)
    S = SpectrumReport((SpectrumItem(1 + 0j, 1, "general", 0, 1, (0,), ()),), "general", 1)
    with pytest.raises(DimensionMismatch):
        verify_power_sums(A, S)


def test_stationary_translation_walk_is_uniform(z4_example):
    V, P, Q = z4_example
    st = stationary_distribution(coin_toss_matrix(P, Q, 1))
    assert st.fixed_space_dim == 1 and st.vector == (F(1, 4),) * 4


def test_stationary_rows_equal_P(z4_example):
    V, P, Q = z4_example
    A = affine_matrix(P, Distribution.point_mass(V.ring, 0))
    assert stationary_distribution(A).vector == P.weights


def test_stationary_is_exact_fixed_vector(z4_example):
    V, P, Q = z4_example
    A = coin_toss_matrix(Distribution.uniform(V), Q, F(1, 3))
    st = stationary_distribution(A)
    assert sum(st.vector) == 1 and is_stationary(A, st.vector)


def test_reducible_chain_reports_dimension():
    R = build_zn(4)
    V = regular_module(R)
    A = walk_matrix(WalkSpec(CoinToss(F(0)), Distribution.uniform(V), Distribution.point_mass(R, 1)))
    st = stationary_distribution(A)
    assert st.vector is None and st.fixed_space_dim == 4


def test_duality_cross_check(z2xz4):
    Z6 = build_zn(6)
    assert cross_check_duality(Distribution.uniform(Z6), regular_module(Z6))
    V = build_free_module(z2xz4, 1)
    Q = dist(z2xz4, "1/8", "1/4", 0, "1/8", "1/16", "3/16", "1/8", "1/8")
    assert cross_check_duality(Q, V)


def test_duality_rejects_ring_mismatch():
    with pytest.raises(ValueError):
        cross_check_duality(Distribution.uniform(build_zn(8)), regular_module(build_product([build_zn(2), build_zn(4)])))


def test_report_json(z4_example):
    V, P, Q = z4_example
    spec = WalkSpec(Affine(), P, Q)
    doc = verify_power_sums(walk_matrix(spec), predicted_spectrum(spec)).to_json()
    assert doc["passed"] and doc["fixed_space_dim"] == 1
    assert [Fraction(x) for x in doc["stationary"]] == list(stationary_distribution(walk_matrix(spec)).vector)
