import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlab import distinguish as D, embezzle as E, qmat


def test_embezzling_state_examples():
    s1 = E.embezzling_state(1)
    assert np.allclose(s1.state.amplitudes, [1.0])
    s2 = E.embezzling_state(2)
    assert s2.c_M == pytest.approx(1.5)
    assert np.allclose(s2.coefficients, [math.sqrt(2 / 3), math.sqrt(1 / 3)])
    s3 = E.embezzling_state(3)
    assert s3.c_M == pytest.approx(11 / 6)
    assert np.allclose(s3.coefficients, np.array([1, 1 / math.sqrt(2), 1 / math.sqrt(3)]) / math.sqrt(11 / 6))


def test_embezzling_state_dense_is_schmidt_form():
    st_ = E.embezzling_state(4).state
    mat = st_.amplitudes.reshape(4, 4)
    assert np.allclose(mat, np.diag(E.embezzling_state(4).coefficients))


def test_required_schmidt_rank_examples():
    assert E.required_schmidt_rank(2, 0.19) == 1024
    # the exponent tends to 1, so the real-valued rank tends to 2 from above
    assert E.required_schmidt_rank_log2(2, 1 - 1e-12) == pytest.approx(1, abs=1e-5)
    assert E.required_schmidt_rank(2, 0.75) == 4
    assert E.required_schmidt_rank(4, 0.19) == 1048576
    assert E.required_schmidt_rank_log2(2, 0.19) == pytest.approx(10)


def test_unitary_map_example():
    assert E.unitary_map(2, 3, 2, 3) == (2, 3)


def test_unitary_map_matches_permutation():
    for m, M in [(2, 3), (3, 7), (4, 4)]:
        perm = E.embezzle_unitary(m, M)
        for i in range(1, m + 1):
            for j in range(1, M + 1):
                k, l = E.unitary_map(i, j, m, M)
                assert perm[(i - 1) * M + j - 1] == (k - 1) * M + l - 1


def test_embezzle_unitary_is_permutation():
    for m, M in [(2, 2), (2, 5), (5, 64)]:
        assert sorted(E.embezzle_unitary(m, M)) == list(range(m * M))


@pytest.mark.parametrize("m,M", [(2, 3), (2, 2), (3, 9), (5, 17)])
def test_transport_examples(m, M):
    assert E.unitary_transport_check(m, M)


def test_transport_rejects_mutant():
    perm = E.embezzle_unitary(2, 3).copy()
    # positions 0 and 5 carry different omega amplitudes
    perm[[0, 5]] = perm[[5, 0]]
    assert not E.unitary_transport_check(2, 3, perm)
    assert not E.unitary_transport_check(2, 3, np.zeros(6, dtype=int))


def test_omega_norm_and_order():
    for m in (2, 3, 4):
        for M in (m, m + 1, 3 * m, 40):
            w = E.omega_coefficients(m, M)
            assert np.linalg.norm(w) == pytest.approx(1, abs=1e-12)
            assert np.all(np.diff(w) <= 0)
            assert E.omega_state(m, M).amplitudes.size == (m * M) ** 2


def test_protocol_fidelity_example():
    fr = E.protocol_fidelity(2, 3)
    ip = (6 / 11) * (1 / math.sqrt(2) + 0.5 + 1 / (2 * math.sqrt(3)))
    assert fr.inner_product == pytest.approx(ip, abs=1e-14)
    assert fr.inner_product == pytest.approx(0.81588, abs=1e-5)
    assert fr.fidelity == pytest.approx(0.66566, abs=1e-5)


def test_protocol_fidelity_thm_regime():
    assert E.protocol_fidelity(2, 1024).fidelity >= 0.81


def test_protocol_fidelity_matches_dense():
    for m, M in [(2, 3), (2, 10), (3, 11), (4, 30)]:
        assert E.mu_fidelity_direct(m, M) == pytest.approx(E.protocol_fidelity(m, M).fidelity, abs=1e-12)


def test_mu_is_normalised_and_unitary_image():
    mu = E.protocol_state_mu(3, 8)
    assert np.linalg.norm(mu.amplitudes) == pytest.approx(1, abs=1e-12)


def test_consumption_closed_form_vs_dense_oracle():
    # oracle: dense xi^E = Tr_AB mu and fidelity with the pure catalyst
    for m, M in [(2, 3), (2, 8), (3, 7), (3, 12)]:
        xi = E.catalyst_marginal(m, M)
        ref = D.purified_distance(xi, E.embezzling_state(M).state)
        assert E.consumption_closed_form(m, M) == pytest.approx(ref, abs=1e-8)
        rec = E.consumption_exact(m, M)
        assert rec.consistent
        assert rec.direct == pytest.approx(ref, abs=1e-10)


def test_consumption_decreasing_in_M():
    vals = [E.consumption_exact(2, M).direct for M in (8, 16, 32, 64, 128)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_consumption_bound_holds():
    for m in (2, 3):
        for M in (4, 9, 33, 128):
            rec = E.consumption_exact(m, M)
            assert rec.direct <= rec.bound + 1e-9


def test_min_rank_for_consumption_examples():
    assert E.min_rank_for_consumption(2, 1) == 4
    assert E.min_rank_for_consumption(2, math.sqrt(2)) == 2
    assert E.min_rank_for_consumption(3, 0.5) == 6561


def test_capacity_lower_bound_examples():
    for eps in (0.01, 0.19, 0.9):
        assert E.capacity_lower_bound(2, eps) == 0
    assert abs(E.capacity_lower_bound(1025, 0.19) - 1.0) < 1e-12


def test_system_marginal_fidelity():
    # F(rho_AB, phi+) <= F(mu, phi+ tau) would fail only if the marginal were wrong
    m, M = 2, 50
    rho = E.system_marginal(m, M)
    assert abs(np.trace(rho.mat).real - 1) < 1e-12
    f = D.uhlmann_fidelity(rho, qmat.max_entangled(m))
    assert f >= E.protocol_fidelity(m, M).fidelity - 1e-12


@given(st.integers(2, 5), st.integers(0, 59))
def test_transport_property(m, extra):
    assert E.unitary_transport_check(m, m + extra)


@given(st.integers(2, 4), st.integers(1, 80))
def test_inner_product_bound(m, extra):
    fr = E.protocol_fidelity(m, m + extra)
    assert fr.inner_product >= fr.inner_product_bound - 1e-12


@given(st.integers(2, 3), st.integers(2, 40))
def test_closed_form_consumption_property(m, M):
    M = max(M, m)
    rec = E.consumption_exact(m, M)
    assert rec.consistent
    assert rec.direct <= rec.bound + 1e-9


@given(st.integers(2, 6), st.floats(0.01, 0.99))
def test_rank_requirement_meets_target(m, eps):
    log2_M = E.required_schmidt_rank_log2(m, eps)
    # ln M - ln m >= sqrt(1 - eps) ln M at the required rank
    assert (1 - math.sqrt(1 - eps)) * log2_M >= math.log2(m) - 1e-9
