import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlab import qmat
from catlab.qmat import DensityOperator, DimensionError, NotPSDError

seeds = st.integers(0, 2**32 - 1)


def test_tensor_identity():
    assert np.array_equal(qmat.tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_projectors():
    out = qmat.tensor(np.diag([1, 0]), np.diag([0, 1]))
    assert np.array_equal(out, np.diag([0, 1, 0, 0]))
    assert out[1, 1] == 1


def test_tensor_keeps_density_type():
    a, b = qmat.maximally_mixed(2), qmat.maximally_mixed(3)
    ab = qmat.tensor(a, b)
    assert isinstance(ab, DensityOperator)
    assert ab.dims == (2, 3)


def test_partial_trace_bell_marginal():
    phi = qmat.max_entangled(2).density()
    assert np.allclose(qmat.partial_trace(phi, [0]).mat, np.eye(2) / 2, atol=1e-14)


def test_partial_trace_product(rng):
    a, b = qmat.random_density(2, rng), qmat.random_density(3, rng)
    ab = qmat.tensor(a, b)
    assert np.allclose(qmat.partial_trace(ab, [0]).mat, a.mat, atol=1e-14)
    assert np.allclose(qmat.partial_trace(ab, [1]).mat, b.mat, atol=1e-14)


def test_partial_trace_bell_diagonal():
    rho = DensityOperator(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    assert np.allclose(qmat.partial_trace(rho, [1]).mat, np.eye(2) / 2)


def test_partial_trace_against_explicit_sum(rng):
    # oracle: sum over an orthonormal basis of B with explicit (I (x) <j|)
    rho = qmat.random_density(6, rng, dims=(2, 3))
    ref = np.zeros((2, 2), complex)
    for j in range(3):
        e = np.zeros((3, 1))
        e[j] = 1
        k = np.kron(np.eye(2), e)
        ref += k.T @ rho.mat @ k
    assert np.allclose(qmat.partial_trace(rho, [0]).mat, ref, atol=1e-14)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionError):
        DensityOperator(np.eye(4) / 4, (2, 3))


def test_hermitian_eig_examples():
    w, _ = qmat.hermitian_eig(qmat.PAULI_Z)
    assert np.allclose(w, [-1, 1])
    w, _ = qmat.hermitian_eig(np.eye(2) / 2)
    assert np.allclose(w, [0.5, 0.5])


def test_hermitian_eig_bell_diagonal():
    b = qmat.bell_basis()
    p = 0.3
    m = p * np.outer(b[:, 0], b[:, 0].conj()) + (1 - p) * np.outer(b[:, 1], b[:, 1].conj())
    w, _ = qmat.hermitian_eig(m)
    assert np.allclose(np.sort(w), [0, 0, p, 1 - p])


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        qmat.hermitian_eig(np.array([[0, 1], [0, 0]], complex))


def test_matrix_functions():
    assert np.allclose(qmat.matrix_sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(qmat.matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(qmat.pinv_sqrt_on_support(np.diag([1.0, 0.0])), np.diag([1.0, 0.0]))


def test_matrix_sqrt_rejects_negative():
    with pytest.raises(NotPSDError):
        qmat.matrix_sqrt_psd(np.diag([1.0, -0.5]))


def test_max_entangled():
    s2 = qmat.max_entangled(2).amplitudes
    assert np.allclose(s2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    s3 = qmat.max_entangled(3).amplitudes
    assert np.allclose(s3[[0, 4, 8]], 1 / np.sqrt(3))
    assert np.isclose(np.linalg.norm(s3), 1)
    m4 = qmat.partial_trace(qmat.max_entangled(4).density(), [0])
    assert np.allclose(m4.mat, np.eye(4) / 4)


def test_random_full_rank_deterministic():
    a = qmat.random_full_rank_state(4, np.random.default_rng(42))
    b = qmat.random_full_rank_state(4, np.random.default_rng(42))
    assert np.array_equal(a.mat, b.mat)


def test_density_validation():
    with pytest.raises(NotPSDError):
        DensityOperator(np.diag([1.5, -0.5]), (2,))
    with pytest.raises(ValueError):
        DensityOperator(np.diag([0.6, 0.6]), (2,))


@given(seeds, st.integers(2, 6))
def test_random_full_rank_properties(seed, d):
    s = qmat.random_full_rank_state(d, np.random.default_rng(seed))
    assert abs(np.trace(s.mat).real - 1) < 1e-12
    assert np.linalg.eigvalsh(s.mat)[0] > 0
    assert np.allclose(s.mat, s.mat.conj().T)


@given(seeds)
def test_tensor_associativity_exact(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (rng.integers(-9, 10, (k, k)) + 1j * rng.integers(-9, 10, (k, k)) for k in (2, 3, 2))
    assert np.array_equal(qmat.tensor(qmat.tensor(x, y), z), qmat.tensor(x, qmat.tensor(y, z)))


@given(seeds)
def test_partial_trace_preserves_trace_and_psd(seed):
    rng = np.random.default_rng(seed)
    rho = qmat.random_density(6, rng, dims=(2, 3))
    for keep in ([0], [1]):
        red = qmat.partial_trace(rho, keep)
        assert abs(np.trace(red.mat).real - 1) < 1e-12
        assert np.linalg.eigvalsh(red.mat)[0] > -1e-12


@given(seeds)
def test_eig_reconstruction(seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = h + h.conj().T
    w, v = qmat.hermitian_eig(h)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - h) < 1e-10
    assert np.allclose(v.conj().T @ v, np.eye(8), atol=1e-12)


@given(seeds)
def test_sqrt_squares_back(seed):
    rho = qmat.random_density(4, np.random.default_rng(seed))
    s = qmat.matrix_sqrt_psd(rho.mat)
    assert np.allclose(s @ s, rho.mat, atol=1e-10)
