"""Applications: catalytic superdense coding and long-distance entanglement distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import choi, depolarizing_length, depolarizing_weight
from .convexsplit import InfeasibleError, n_min_random
from .distinguish import conditional_entropy, ppt_min_eigenvalue, uhlmann_fidelity
from .embezzle import harmonic, required_schmidt_rank_log2
from .qmat import DensityOperator, DimensionError, as_density, max_entangled


@dataclass(frozen=True)
class SdcCapacity:
    value: float
    d: int
    conditional_entropy: float


def sdc_capacity(rho_ab, dims=None) -> SdcCapacity:
    """Superdense coding capacity log2 d - H(A|B) in bits."""
    rho_ab = as_density(rho_ab)
    dims = tuple(rho_ab.dims if dims is None else dims)
    if len(dims) != 2 or dims[0] != dims[1]:
        raise DimensionError(f"superdense coding needs equal local dimensions, got {dims}")
    h = conditional_entropy(rho_ab, dims)
    return SdcCapacity(math.log2(dims[0]) - h, dims[0], h)


def catalytic_sdc_coefficients(d: int, M: int) -> np.ndarray:
    """d x d matrix G with rho^E_AB = sum_ij G[i, j] |ii><jj|.

    G[i, j] = (1/c_M) sum_{k=0}^{K} 1/sqrt((i + k d)(j + k d)), K = floor((M - max(i, j)) / d),
    with i, j 1-based.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if M < d:
        raise ValueError("M must be >= d")
    c = harmonic(M)
    g = np.zeros((d, d))
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            K = (M - max(i, j)) // d
            k = np.arange(K + 1)
            g[i - 1, j - 1] = math.fsum(1.0 / np.sqrt((i + k * d) * (j + k * d)))
    return g / c


def catalytic_sdc_state(d: int, M: int) -> DensityOperator:
    """rho^E_AB on dims [d, d] after the embezzling protocol with Schmidt rank M."""
    g = catalytic_sdc_coefficients(d, M)
    mat = np.zeros((d * d, d * d), dtype=complex)
    diag = np.arange(d) * (d + 1)
    mat[np.ix_(diag, diag)] = g
    return DensityOperator(mat, (d, d), validate=False)


def distribution_threshold_bare(alpha: float) -> float:
    """(ln 3)/alpha: beyond this length the Choi state of the depolarizing link is separable."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return math.log(3) / alpha


def distributed_state(alpha: float, length: float) -> DensityOperator:
    """(id (x) N_length)(phi+_2)."""
    return choi(depolarizing_length(alpha, length))


def ppt_witness_at(alpha: float, length: float) -> float:
    return ppt_min_eigenvalue(distributed_state(alpha, length), (2, 2))


def ppt_boundary_length(alpha: float, rtol: float = 1e-9, max_iter: int = 200) -> float:
    """Bisection for the length where the PPT witness of the distributed state crosses zero."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lo, hi = 0.0, 1.0 / alpha
    while ppt_witness_at(alpha, hi) < 0:
        lo, hi = hi, 2 * hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if ppt_witness_at(alpha, mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DistributionScenario:
    alpha: float
    l: float
    s: float

    def __post_init__(self):
        if self.alpha < 0 or self.l < 0:
            raise ValueError("alpha and l must be non-negative")
        if not 0.0 <= self.s <= self.l:
            raise ValueError("node position s must lie in [0, l]")


@dataclass(frozen=True)
class DistributionProfile:
    scenario: DistributionScenario
    rho_ar: DensityOperator
    ppt_witness: float
    fidelity_bare: float
    target_fidelity: float
    embezzle_log2_rank: float
    cs_copies: int | None
    cs_log2_dim: float | None
    capacity_lower_bound: float

    @property
    def entangled_bare(self) -> bool:
        return self.ppt_witness < 0


def distribution_entanglement_profile(
    scenario: DistributionScenario,
    target_fidelity: float = 0.9,
    N: int = 200,
    seed: int = 0,
    convex_split: bool = True,
) -> DistributionProfile:
    """State shared between A and the node R at distance s, with catalyst requirements.

    The embezzling requirement is the Schmidt rank for error 1 - target and
    does not depend on the link; the convex-split requirement comes from
    n_min over N random full-rank zetas for the Choi state of the A-R link.
    Both protocols then certify log2(2) = 1 qubit regardless of the span l.
    """
    if not 0.0 < target_fidelity < 1.0:
        raise ValueError("target fidelity must lie in (0, 1)")
    eps = 1.0 - target_fidelity
    rho = distributed_state(scenario.alpha, scenario.s)
    witness = ppt_min_eigenvalue(rho, (2, 2))
    f_bare = uhlmann_fidelity(rho, max_entangled(2))
    log2_rank = required_schmidt_rank_log2(2, eps)
    n_cs = log2_dim = None
    if convex_split:
        try:
            n_cs, _, _ = n_min_random(rho, N, eps, seed)
            # tau^CS spans n - 1 copies of a two-qubit state
            log2_dim = 2.0 * (n_cs - 1)
        except InfeasibleError:
            pass
    return DistributionProfile(
        scenario=scenario,
        rho_ar=rho,
        ppt_witness=witness,
        fidelity_bare=f_bare,
        target_fidelity=target_fidelity,
        embezzle_log2_rank=log2_rank,
        cs_copies=n_cs,
        cs_log2_dim=log2_dim,
        capacity_lower_bound=1.0,
    )


def link_weight(alpha: float, length: float) -> float:
    return depolarizing_weight(alpha, length)
