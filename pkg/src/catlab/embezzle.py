"""Embezzling-state catalysts.

The catalyst is |tau^E> = c_M^{-1/2} sum_j j^{-1/2} |jj>.  A local permutation
U on (A, C) and its copy on (B, C') take |11>|tau^E> to a state whose overlap
with |phi+_m>|tau^E> grows with the Schmidt rank M.

Indexing: formulas use 1-based labels (i, j, k, l); arrays here are 0-based,
so label ``x`` lives at position ``x - 1``.  Pure states on A C B C' are stored
as (m M) x (m M) amplitude matrices ``psi[(a, c), (b, c')]`` so that a local
permutation on both halves is ``psi[P][:, P]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from ._util import ceil_tol
from .qmat import DensityOperator, PureState

log = logging.getLogger(__name__)

# Largest m*M for which mu is materialised as an amplitude matrix.
MU_BUDGET = 4096
CLOSED_FORM_TOL = 1e-8


def harmonic(M: int) -> float:
    """c_M = sum_{j=1}^M 1/j (exact summation in float64)."""
    return math.fsum(1.0 / j for j in range(1, M + 1))


@dataclass(frozen=True)
class EmbezzlingState:
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("Schmidt rank M must be >= 1")

    @cached_property
    def c_M(self) -> float:
        return harmonic(self.M)

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Schmidt coefficients 1/sqrt(c_M j), j = 1..M."""
        j = np.arange(1, self.M + 1, dtype=float)
        c = 1.0 / np.sqrt(self.c_M * j)
        c.setflags(write=False)
        return c

    @property
    def state(self) -> PureState:
        """Dense |tau^E> on dims [M, M] (M**2 amplitudes)."""
        v = np.zeros(self.M * self.M, dtype=complex)
        v[:: self.M + 1] = self.coefficients
        return PureState(v, (self.M, self.M))


def embezzling_state(M: int) -> EmbezzlingState:
    return EmbezzlingState(int(M))


def required_schmidt_rank(m: int, epsilon: float) -> int:
    """ceil(m ** (1 / (1 - sqrt(1 - eps))))."""
    if m < 2:
        raise ValueError("target Schmidt rank m must be >= 2")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return ceil_tol(m ** (1.0 / (1.0 - math.sqrt(1.0 - epsilon))))


def required_schmidt_rank_log2(m: int, epsilon: float) -> float:
    """log2 of the rank requirement, usable when the rank itself overflows."""
    if m < 2 or not 0.0 < epsilon < 1.0:
        raise ValueError("need m >= 2 and epsilon in (0, 1)")
    return math.log2(m) / (1.0 - math.sqrt(1.0 - epsilon))


def _check_mM(m: int, M: int) -> None:
    if m < 2:
        raise ValueError("m must be >= 2")
    if M < m:
        raise ValueError("M must be >= m")


def unitary_map(i: int, j: int, m: int, M: int) -> tuple[int, int]:
    """(i, j) -> (k, l), 1-based, with l = ceil(((i-1)M + j)/m), k = (i-1)M + j - (l-1)m."""
    t = (i - 1) * M + j
    l = -(-t // m)
    return t - (l - 1) * m, l


def embezzle_unitary(m: int, M: int) -> np.ndarray:
    """Permutation of the flat A C index: ``perm[i*M + j] = k*M + l`` (0-based).

    With flat 0-based position f = (i-1)M + j - 1 the 1-based rule reduces to
    l - 1 = f // m and k - 1 = f % m.
    """
    _check_mM(m, M)
    f = np.arange(m * M)
    return (f % m) * M + f // m


def omega_coefficients(m: int, M: int) -> np.ndarray:
    """omega_ij = 1/sqrt(ceil(((i-1)M + j)/m) m c_M) in dictionary order (length m M)."""
    _check_mM(m, M)
    t = np.arange(1, m * M + 1)
    ceil_t = -(-t // m)
    return 1.0 / np.sqrt(ceil_t * m * harmonic(M))


def _diag_matrix(coeffs: np.ndarray) -> np.ndarray:
    return np.diag(coeffs.astype(complex))


def omega_state(m: int, M: int) -> PureState:
    """|omega> = sum_ij omega_ij |ii>_{AB} |jj>_{CC'} on dims [m, M, m, M] (order A, C, B, C')."""
    if (m * M) ** 2 > MU_BUDGET ** 2:
        raise MemoryError("omega state exceeds dense budget")
    return PureState(_diag_matrix(omega_coefficients(m, M)).reshape(-1), (m, M, m, M))


def target_amplitudes(m: int, M: int) -> np.ndarray:
    """|phi+_m> (x) |tau^E> as an amplitude matrix on (A C) x (B C')."""
    _check_mM(m, M)
    tau = embezzling_state(M).coefficients
    # position (k, l) on both halves carries (1/sqrt m) tau_l
    return _diag_matrix(np.tile(tau, m) / math.sqrt(m))


def apply_local_permutation(psi: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """(U (x) U) |psi> for a permutation unitary U acting on both halves.

    U|x> = |perm[x]>, so the amplitude at x moves to perm[x].
    """
    out = np.zeros_like(psi)
    out[np.ix_(perm, perm)] = psi
    return out


def unitary_transport_check(m: int, M: int, perm: np.ndarray | None = None, tol: float = 1e-10) -> bool:
    """True iff (U (x) U)|omega> equals |phi+_m>|tau^E> to ``tol`` in every amplitude."""
    _check_mM(m, M)
    if (m * M) > MU_BUDGET:
        raise MemoryError("transport check exceeds dense budget")
    perm = embezzle_unitary(m, M) if perm is None else np.asarray(perm)
    if sorted(perm.tolist()) != list(range(m * M)):
        return False
    psi = _diag_matrix(omega_coefficients(m, M))
    moved = apply_local_permutation(psi, perm)
    return bool(np.max(np.abs(moved - target_amplitudes(m, M))) < tol)


class FidelityReport(NamedTuple):
    fidelity: float
    inner_product: float
    inner_product_bound: float


def protocol_fidelity(m: int, M: int) -> FidelityReport:
    """F(mu, phi+_m (x) tau^E) = |<11 tau^E | omega>|**2 and the log-ratio bound on the overlap."""
    _check_mM(m, M)
    tau = embezzling_state(M).coefficients
    omega_first_row = omega_coefficients(m, M)[:M]
    ip = math.fsum(tau * omega_first_row)
    bound = (math.log(M) - math.log(m)) / math.log(M)
    return FidelityReport(ip * ip, ip, bound)


def initial_amplitudes(m: int, M: int) -> np.ndarray:
    """|11>_{AB} |tau^E>_{CC'} as an amplitude matrix on (A C) x (B C')."""
    _check_mM(m, M)
    psi = np.zeros((m * M, m * M), dtype=complex)
    tau = embezzling_state(M).coefficients
    idx = np.arange(M)
    psi[idx, idx] = tau
    return psi


def protocol_amplitudes(m: int, M: int, budget: int = MU_BUDGET) -> np.ndarray:
    """Amplitude matrix of mu = (U (x) U)(|11>|tau^E>) on (A C) x (B C')."""
    _check_mM(m, M)
    if m * M > budget:
        raise MemoryError(f"m*M = {m * M} exceeds budget {budget}")
    return apply_local_permutation(initial_amplitudes(m, M), embezzle_unitary(m, M))


def protocol_state_mu(m: int, M: int, budget: int = MU_BUDGET) -> PureState:
    """mu as a pure state on dims [m, M, m, M] (order A, C, B, C')."""
    return PureState(protocol_amplitudes(m, M, budget).reshape(-1), (m, M, m, M))


def mu_fidelity_direct(m: int, M: int, budget: int = MU_BUDGET) -> float:
    """|<phi+_m tau^E | mu>|**2 from the materialised amplitudes."""
    psi = protocol_amplitudes(m, M, budget)
    return float(abs(np.vdot(target_amplitudes(m, M), psi)) ** 2)


def reorder_abcc(psi: np.ndarray, m: int, M: int) -> np.ndarray:
    """Amplitude tensor indexed [a, b, c, c'] from the (A C) x (B C') matrix."""
    return psi.reshape(m, M, m, M).transpose(0, 2, 1, 3)


def catalyst_marginal_fidelity(psi: np.ndarray, m: int, M: int) -> float:
    """<tau^E| Tr_AB |psi><psi| |tau^E> by contracting A B, without forming the M**2 x M**2 marginal."""
    t = reorder_abcc(psi, m, M)
    tau = embezzling_state(M).coefficients
    # overlap of each (a, b) block with <tau^E| = sum_j tau_j <jj|
    blocks = np.einsum("abjj,j->ab", t, tau)
    return float(np.sum(np.abs(blocks) ** 2))


def consumption_closed_form(m: int, M: int) -> float:
    """P(xi^E, tau^E) from the closed-form double sum over t and i < K."""
    _check_mM(m, M)
    c = harmonic(M)
    t = np.arange(1, M + 1, dtype=np.int64)
    K = -(-t // m)
    base = t - ((t - 1) // m) * m
    total = math.fsum(1.0 / (t * K))
    # the inner sum over i depends on t only through (base, K), so it is a prefix sum
    i = np.arange(1, int(K.max()), dtype=float)
    inner = np.zeros((m, i.size + 1))
    for b in range(1, m + 1):
        inner[b - 1, 1:] = np.cumsum(1.0 / np.sqrt(i * (b + (i - 1) * m)))
    total += math.fsum(2.0 * inner[base - 1, K - 1] / np.sqrt(t * K.astype(float)))
    fid = total / (c * c)
    return math.sqrt(max(0.0, 1.0 - fid))


def consumption_bound(m: int, M: int) -> float:
    """sqrt(2 log_M m)."""
    _check_mM(m, M)
    return math.sqrt(2.0 * math.log(m) / math.log(M))


@dataclass(frozen=True)
class ConsumptionRecord:
    exact: float
    bound: float
    direct: float | None
    discrepancy: float | None

    @property
    def consistent(self) -> bool:
        return self.discrepancy is None or self.discrepancy <= CLOSED_FORM_TOL


def consumption_exact(m: int, M: int, budget: int = MU_BUDGET) -> ConsumptionRecord:
    """Closed-form consumption with the dense partial-trace value as reference.

    ``direct`` is ``None`` when m*M exceeds ``budget``; a closed-form/direct
    mismatch above 1e-8 is logged as a warning and kept in the record.
    """
    exact = consumption_closed_form(m, M)
    bound = consumption_bound(m, M)
    if m * M > budget:
        return ConsumptionRecord(exact, bound, None, None)
    fid = catalyst_marginal_fidelity(protocol_amplitudes(m, M, budget), m, M)
    direct = math.sqrt(max(0.0, 1.0 - fid))
    gap = abs(direct - exact)
    if gap > CLOSED_FORM_TOL:
        log.warning("closed-form consumption differs from partial-trace value at m=%d M=%d: %.3e", m, M, gap)
    return ConsumptionRecord(exact, bound, direct, gap)


def min_rank_for_consumption(m: int, delta: float) -> int:
    """ceil(m ** (2 / delta**2))."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if m < 2:
        raise ValueError("m must be >= 2")
    return ceil_tol(m ** (2.0 / delta ** 2))


def capacity_lower_bound(d_c: int, epsilon: float) -> float:
    """(1 - sqrt(1 - eps)) log2(d_c - 1) qubits."""
    if d_c < 2:
        raise ValueError("catalyst dimension must be >= 2")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return (1.0 - math.sqrt(1.0 - epsilon)) * math.log2(d_c - 1)


def catalyst_marginal(m: int, M: int, budget: int = 64) -> DensityOperator:
    """Dense xi^E = Tr_AB mu on dims [M, M]; only for small M."""
    if M > budget:
        raise MemoryError("dense catalyst marginal is M**2 x M**2")
    t = reorder_abcc(protocol_amplitudes(m, M), m, M).reshape(m * m, M * M)
    return DensityOperator(t.T @ t.conj(), (M, M), validate=False)


def system_marginal(m: int, M: int, budget: int = MU_BUDGET) -> DensityOperator:
    """rho^E_AB = Tr_CC' mu on dims [m, m]."""
    t = reorder_abcc(protocol_amplitudes(m, M, budget), m, M).reshape(m * m, M * M)
    return DensityOperator(t @ t.conj().T, (m, m), validate=False)
