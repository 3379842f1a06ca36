"""Dense complex linear algebra and state primitives for small multipartite systems.

States are plain numpy arrays wrapped in two light containers that carry the
subsystem dimension list: :class:`DensityOperator` and :class:`PureState`.
Every function here is pure; containers are frozen and their arrays are made
read-only on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Hermiticity / trace / positivity tolerance for validating states.
STATE_TOL = 1e-9
# Relative eigenvalue cutoff (w.r.t. the largest eigenvalue) for rank decisions.
SUPPORT_TOL = 1e-10
MAX_RESAMPLE = 100


class DimensionError(ValueError):
    """Raised when operands have incompatible shapes or subsystem dimensions."""


class NotPSDError(ValueError):
    """Raised when a matrix expected to be positive semidefinite is not."""


def _as_dims(dims: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise DimensionError(f"invalid subsystem dimensions {out}")
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive semidefinite matrix with a subsystem dimension list."""

    mat: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, mat, dims: Sequence[int] | None = None, *, validate: bool = True, tol: float = STATE_TOL):
        mat = np.asarray(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"density operator must be square, got shape {mat.shape}")
        dims = (mat.shape[0],) if dims is None else _as_dims(dims)
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"dims {dims} do not multiply to matrix order {mat.shape[0]}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("density operator has non-finite entries")
        if validate:
            if np.max(np.abs(mat - mat.conj().T)) > tol:
                raise ValueError("density operator is not Hermitian")
            tr = np.trace(mat).real
            if abs(tr - 1.0) > tol:
                raise ValueError(f"density operator has trace {tr}, expected 1")
            lo = np.linalg.eigvalsh(mat)[0]
            if lo < -tol:
                raise NotPSDError(f"density operator has negative eigenvalue {lo}")
        object.__setattr__(self, "mat", _frozen(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"DensityOperator(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm amplitude vector with a subsystem dimension list."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None, *, tol: float = STATE_TOL):
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        dims = (vec.size,) if dims is None else _as_dims(dims)
        if int(np.prod(dims)) != vec.size:
            raise DimensionError(f"dims {dims} do not multiply to vector length {vec.size}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"pure state has norm {norm}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(vec))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        v = self.amplitudes
        return DensityOperator(np.outer(v, v.conj()), self.dims, validate=False)

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


def as_density(state) -> DensityOperator:
    """Coerce a PureState, DensityOperator or square array to a DensityOperator."""
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureState):
        return state.density()
    return DensityOperator(state)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def tensor(*ops):
    """Kronecker product of matrices, vectors or states.

    When every operand is a DensityOperator (or every operand a PureState) the
    result is of the same kind with concatenated dims; otherwise a plain array.
    """
    if not ops:
        raise ValueError("tensor needs at least one operand")
    if all(isinstance(o, DensityOperator) for o in ops):
        mat = ops[0].mat
        for o in ops[1:]:
            mat = np.kron(mat, o.mat)
        return DensityOperator(mat, sum((o.dims for o in ops), ()), validate=False)
    if all(isinstance(o, PureState) for o in ops):
        vec = ops[0].amplitudes
        for o in ops[1:]:
            vec = np.kron(vec, o.amplitudes)
        return PureState(vec, sum((o.dims for o in ops), ()))
    out = np.asarray(ops[0])
    for o in ops[1:]:
        out = np.kron(out, np.asarray(o))
    return out


def tensor_power(state: DensityOperator, n: int) -> DensityOperator:
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    return tensor(*([state] * n))


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems retain their original relative order.
    """
    dims = rho.dims
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise IndexError(f"subsystem index out of range for dims {dims}")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.mat.reshape(dims + dims)
    # Contract each traced pair (i, n+i) with einsum index labels.
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise DimensionError("too many subsystems for partial_trace")
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in traced:
        col[i] = row[i]
    out_row = "".join(row[i] for i in keep)
    out_col = "".join(col[i] for i in keep)
    subscripts = "".join(row) + "".join(col) + "->" + out_row + out_col
    kd = tuple(dims[i] for i in keep)
    d = int(np.prod(kd))
    mat = np.einsum(subscripts, t).reshape(d, d)
    return DensityOperator(mat, kd, validate=False)


def partial_transpose(mat: np.ndarray, dims: Sequence[int], sys: int = 1) -> np.ndarray:
    """Transpose subsystem ``sys`` of an operator on ``dims``."""
    dims = _as_dims(dims)
    n = len(dims)
    if not 0 <= sys < n:
        raise IndexError(f"subsystem {sys} out of range for dims {dims}")
    t = np.asarray(mat).reshape(dims + dims)
    axes = list(range(2 * n))
    axes[sys], axes[n + sys] = axes[n + sys], axes[sys]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def is_hermitian(m: np.ndarray, tol: float = STATE_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def hermitian_eig(m, tol: float = STATE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix."""
    m = m.mat if isinstance(m, DensityOperator) else np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol * max(1.0, np.max(np.abs(m), initial=0.0))):
        raise ValueError("hermitian_eig requires a Hermitian matrix")
    return np.linalg.eigh((m + m.conj().T) / 2)


def _psd_eig(m, tol: float) -> tuple[np.ndarray, np.ndarray]:
    w, v = hermitian_eig(m, tol)
    scale = max(1.0, abs(w[-1]) if w.size else 1.0)
    if w.size and w[0] < -tol * scale:
        raise NotPSDError(f"matrix has negative eigenvalue {w[0]}")
    return np.clip(w, 0.0, None), v


def matrix_sqrt_psd(m, tol: float = STATE_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix."""
    w, v = _psd_eig(m, tol)
    return (v * np.sqrt(w)) @ v.conj().T


def support_projector(m, support_tol: float = SUPPORT_TOL, tol: float = STATE_TOL) -> np.ndarray:
    w, v = _psd_eig(m, tol)
    on = w > support_tol * max(w[-1], 0.0) if w.size else w > 0
    vs = v[:, on]
    return vs @ vs.conj().T


def pinv_sqrt_on_support(m, support_tol: float = SUPPORT_TOL, tol: float = STATE_TOL) -> np.ndarray:
    """Inverse square root restricted to the support; zero on the kernel."""
    w, v = _psd_eig(m, tol)
    cut = support_tol * max(w[-1], 0.0) if w.size else 0.0
    inv = np.zeros_like(w)
    on = w > cut
    inv[on] = 1.0 / np.sqrt(w[on])
    return (v * inv) @ v.conj().T


def max_entangled(d: int) -> PureState:
    """(1/sqrt d) sum_i |ii> on dims [d, d]."""
    if d < 2:
        raise ValueError("maximally entangled state needs d >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(v, (d, d))


def maximally_mixed(d: int, dims: Sequence[int] | None = None) -> DensityOperator:
    return DensityOperator(np.eye(d, dtype=complex) / d, dims or (d,), validate=False)


def random_full_rank_state(
    d: int,
    rng: np.random.Generator,
    dims: Sequence[int] | None = None,
    support_tol: float = SUPPORT_TOL,
) -> DensityOperator:
    """Ginibre-ensemble density matrix G G^dag / Tr[G G^dag], resampled until full rank."""
    if d < 2:
        raise ValueError("random_full_rank_state needs d >= 2")
    for _ in range(MAX_RESAMPLE):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ g.conj().T
        rho = rho / np.trace(rho).real
        rho = (rho + rho.conj().T) / 2
        w = np.linalg.eigvalsh(rho)
        if w[0] > support_tol * w[-1]:
            return DensityOperator(rho, dims or (d,), validate=False)
    raise RuntimeError(f"no full-rank sample after {MAX_RESAMPLE} attempts")


def random_density(d: int, rng: np.random.Generator, rank: int | None = None, dims=None) -> DensityOperator:
    """Ginibre state of the given rank (full rank by default); no resampling."""
    r = d if rank is None else rank
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityOperator((rho + rho.conj().T) / 2, dims or (d,), validate=False)


def mix(weights: Sequence[float], states: Sequence) -> DensityOperator:
    """Convex combination of states (pure states are converted to projectors)."""
    states = [as_density(s) for s in states]
    dims = states[0].dims
    mat = sum(w * s.mat for w, s in zip(weights, states))
    return DensityOperator(mat, dims, validate=False)


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def bell_basis() -> np.ndarray:
    """Columns phi+, phi-, psi+, psi- in the computational basis {00,01,10,11}."""
    s = 1 / np.sqrt(2)
    return np.array(
        [
            [s, s, 0, 0],
            [0, 0, s, s],
            [0, 0, s, -s],
            [s, -s, 0, 0],
        ],
        dtype=complex,
    )
