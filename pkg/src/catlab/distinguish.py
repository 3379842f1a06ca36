"""Distinguishability measures: Uhlmann fidelity, purified distance, D_max, entropies, PPT."""

from __future__ import annotations

import math

import numpy as np

from .qmat import (
    SUPPORT_TOL,
    STATE_TOL,
    DensityOperator,
    DimensionError,
    PureState,
    as_density,
    partial_trace,
    partial_transpose,
    pinv_sqrt_on_support,
    support_projector,
)

# Purity above which the second argument is treated as a pure state.
_PURE_TOL = 1e-12


def _check_same_dim(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"states act on different dimensions ({a.dim} vs {b.dim})")


def _pure_vector(state) -> np.ndarray | None:
    if isinstance(state, PureState):
        return state.amplitudes
    m = state.mat
    if abs(np.trace(m @ m).real - 1.0) > _PURE_TOL:
        return None
    w, v = np.linalg.eigh(m)
    return v[:, -1]


def _clip01(x: float) -> float:
    return float(min(1.0, max(0.0, x)))


def uhlmann_fidelity(rho, sigma) -> float:
    """Squared Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.

    Either argument may be a PureState; when one of them is pure the value is
    computed as the expectation <psi|rho|psi>.
    """
    if isinstance(rho, PureState) and not isinstance(sigma, PureState):
        rho, sigma = sigma, rho
    if isinstance(rho, PureState):
        _check_same_dim(rho, sigma)
        return _clip01(abs(np.vdot(rho.amplitudes, sigma.amplitudes)) ** 2)
    rho = as_density(rho)
    if not isinstance(sigma, PureState):
        sigma = as_density(sigma)
    _check_same_dim(rho, sigma)
    psi = _pure_vector(sigma)
    if psi is None:
        psi = _pure_vector(rho)
        if psi is not None:
            rho, sigma = sigma, rho
    if psi is not None:
        return _clip01(np.vdot(psi, rho.mat @ psi).real)
    # nuclear norm of sqrt(rho) sqrt(sigma); singular values avoid the sqrt of
    # round-off eigenvalues that an eigh of sqrt(sigma) rho sqrt(sigma) picks up
    sv = np.linalg.svd(_sqrt_psd(rho.mat) @ _sqrt_psd(sigma.mat), compute_uv=False)
    return _clip01(math.fsum(sv) ** 2)


def _sqrt_psd(m):
    w, v = np.linalg.eigh(m)
    w = np.where(w > SUPPORT_TOL * max(w[-1], 0.0), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def purified_distance(rho, sigma) -> float:
    """sqrt(1 - F_U(rho, sigma))."""
    return math.sqrt(1.0 - uhlmann_fidelity(rho, sigma))


def dmax(rho, sigma, support_tol: float = SUPPORT_TOL) -> float:
    """Max-relative entropy in bits; ``math.inf`` when supp(rho) is not inside supp(sigma)."""
    rho, sigma = as_density(rho), as_density(sigma)
    _check_same_dim(rho, sigma)
    proj = support_projector(sigma.mat, support_tol)
    leak = np.trace(rho.mat - proj @ rho.mat).real
    if leak >= support_tol:
        return math.inf
    s = pinv_sqrt_on_support(sigma.mat, support_tol)
    x = s @ rho.mat @ s
    lam = np.linalg.eigvalsh((x + x.conj().T) / 2)[-1]
    return math.log2(lam)


def dmax_feasibility_check(rho, sigma, lam: float, tol: float = STATE_TOL) -> bool:
    """True iff rho <= 2**lam * sigma, i.e. the smallest eigenvalue of the gap is >= -tol."""
    rho, sigma = as_density(rho), as_density(sigma)
    _check_same_dim(rho, sigma)
    gap = (2.0 ** lam) * sigma.mat - rho.mat
    return bool(np.linalg.eigvalsh((gap + gap.conj().T) / 2)[0] >= -tol)


def von_neumann_entropy(rho, support_tol: float = SUPPORT_TOL) -> float:
    """Entropy in bits with the 0 log 0 = 0 convention."""
    rho = as_density(rho)
    w = np.linalg.eigvalsh(rho.mat)
    w = w[w > support_tol]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def _bipartite(rho, dims):
    rho = as_density(rho)
    dims = tuple(rho.dims if dims is None else dims)
    if len(dims) != 2:
        raise DimensionError(f"expected bipartite dims, got {dims}")
    if dims != rho.dims:
        rho = DensityOperator(rho.mat, dims, validate=False)
    return rho, dims


def conditional_entropy(rho_ab, dims=None) -> float:
    """H(A|B) = H(AB) - H(B) in bits."""
    rho_ab, _ = _bipartite(rho_ab, dims)
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, [1]))


def ppt_min_eigenvalue(rho_ab, dims=None) -> float:
    """Smallest eigenvalue of the partial transpose over B.

    Negative iff the state is entangled, for 2x2 and 2x3 systems.
    """
    rho_ab, dims = _bipartite(rho_ab, dims)
    pt = partial_transpose(rho_ab.mat, dims, sys=1)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])
