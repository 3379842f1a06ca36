import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlab import channels, distinguish as D, qmat
from catlab.qmat import DensityOperator

seeds = st.integers(0, 2**32 - 1)
ZERO = DensityOperator(np.diag([1.0, 0.0]), (2,))
ONE = DensityOperator(np.diag([0.0, 1.0]), (2,))
HALF = qmat.maximally_mixed(2)


def _from_spectrum(rng, w):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    return q @ np.diag(w) @ q.conj().T, q @ np.diag(np.sqrt(w)) @ q.conj().T


def test_fidelity_matches_svd_oracle(rng):
    # oracle: squared nuclear norm of sqrt(a) sqrt(b), square roots taken from the known spectra
    for _ in range(20):
        a, sa = _from_spectrum(rng, rng.dirichlet(np.ones(4)))
        b, sb = _from_spectrum(rng, np.r_[rng.dirichlet(np.ones(2)), 0.0, 0.0])
        ref = np.linalg.svd(sa @ sb, compute_uv=False).sum() ** 2
        assert D.uhlmann_fidelity(DensityOperator(a, (4,)), DensityOperator(b, (4,))) == pytest.approx(ref, abs=1e-12)


def test_purified_distance_examples(rng):
    rho = qmat.random_density(3, rng)
    assert D.purified_distance(rho, rho) == pytest.approx(0, abs=1e-5)
    assert D.purified_distance(ZERO, ONE) == pytest.approx(1)
    assert D.purified_distance(HALF, ZERO) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_dmax_examples(rng):
    rho = qmat.random_full_rank_state(4, rng)
    assert D.dmax(rho, rho) == pytest.approx(0, abs=1e-9)
    assert D.dmax(ZERO, HALF) == pytest.approx(1, abs=1e-12)


def test_dmax_bell_diagonal_oracle():
    # Bell-basis weights (0.75, 0.25, 0, 0) against (0.625, 0.125, 0.125, 0.125)
    rho = channels.choi(channels.dephasing(0.75))
    phi = qmat.max_entangled(2).density().mat
    tau = DensityOperator(0.5 * phi + 0.5 * np.eye(4) / 4, (2, 2))
    assert D.dmax(rho, tau) == pytest.approx(1.0, abs=1e-12)


def test_dmax_support_violation():
    assert D.dmax(HALF, ZERO) == math.inf


def test_feasibility_examples(rng):
    rho = qmat.random_full_rank_state(3, rng)
    assert D.dmax_feasibility_check(rho, rho, 0.0)
    for _ in range(10):
        a, b = qmat.random_full_rank_state(3, rng), qmat.random_full_rank_state(3, rng)
        k = D.dmax(a, b)
        assert D.dmax_feasibility_check(a, b, k + 1e-6)
        assert not D.dmax_feasibility_check(a, b, k - 0.01)


def test_entropy_examples():
    assert D.von_neumann_entropy(ZERO) == pytest.approx(0, abs=1e-12)
    assert D.von_neumann_entropy(qmat.maximally_mixed(4)) == pytest.approx(2)
    assert D.von_neumann_entropy(DensityOperator(np.diag([0.5, 0.5, 0, 0]), (4,))) == pytest.approx(1)


def test_conditional_entropy_examples(rng):
    assert D.conditional_entropy(qmat.max_entangled(2)) == pytest.approx(-1, abs=1e-12)
    assert D.conditional_entropy(qmat.maximally_mixed(4, (2, 2))) == pytest.approx(1)
    prod = qmat.tensor(HALF, qmat.random_density(2, rng))
    assert D.conditional_entropy(prod) == pytest.approx(1, abs=1e-10)


def test_ppt_examples():
    assert D.ppt_min_eigenvalue(qmat.max_entangled(2)) == pytest.approx(-0.5, abs=1e-12)
    assert D.ppt_min_eigenvalue(qmat.maximally_mixed(4, (2, 2))) == pytest.approx(0.25)
    phi = qmat.max_entangled(2).density().mat
    iso = DensityOperator(phi / 3 + (2 / 3) * np.eye(4) / 4, (2, 2))
    assert abs(D.ppt_min_eigenvalue(iso)) < 1e-12


def _pair(seed, d=4):
    rng = np.random.default_rng(seed)
    return (qmat.random_full_rank_state(d, rng, dims=(2, 2)), qmat.random_full_rank_state(d, rng, dims=(2, 2)))


@given(seeds)
def test_fidelity_symmetric_and_bounded(seed):
    a, b = _pair(seed)
    f = D.uhlmann_fidelity(a, b)
    assert 0 <= f <= 1
    assert f == pytest.approx(D.uhlmann_fidelity(b, a), abs=1e-10)


@given(seeds)
def test_purified_distance_triangle(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (qmat.random_density(4, rng) for _ in range(3))
    p = D.purified_distance
    assert p(x, y) <= p(x, z) + p(z, y) + 1e-9


@given(seeds)
def test_dmax_feasibility_agreement(seed):
    a, b = _pair(seed)
    k = D.dmax(a, b)
    assert k >= -1e-12
    assert D.dmax_feasibility_check(a, b, k + 1e-6)
    assert not D.dmax_feasibility_check(a, b, k - 1e-3)


@given(seeds, st.sampled_from(["trace", "dephasing", "damping"]))
def test_data_processing(seed, kind):
    a, b = _pair(seed)
    if kind == "trace":
        ma, mb = qmat.partial_trace(a, [0]), qmat.partial_trace(b, [0])
    else:
        ch = channels.dephasing(0.3) if kind == "dephasing" else channels.amplitude_damping(0.4)
        ma, mb = channels.apply(ch, a, 0), channels.apply(ch, b, 0)
    assert D.dmax(ma, mb) <= D.dmax(a, b) + 1e-9
    assert D.purified_distance(ma, mb) <= D.purified_distance(a, b) + 1e-9


@given(seeds)
def test_entropy_bounds(seed):
    rho = qmat.random_density(4, np.random.default_rng(seed), dims=(2, 2))
    assert -1e-12 <= D.von_neumann_entropy(rho) <= 2 + 1e-12
    assert -1 - 1e-12 <= D.conditional_entropy(rho) <= 1 + 1e-12
