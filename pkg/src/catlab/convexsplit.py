"""Convex-split catalysts: the mixed state mu, copy-count bounds and n_min searches.

The catalyst is tau^{(x) n-1} with tau = p phi+ + (1 - p) zeta.  For a Choi
state rho the protocol needs

    sqrt(2**k / n) + sqrt(1 - F(tau, phi+)) <= sqrt(eps),   k = D_max(rho || tau),

and :func:`n_min_for_zeta` searches the segment tau(p) for the smallest n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._util import ceil_tol
from .distinguish import dmax, purified_distance, uhlmann_fidelity
from .qmat import (
    SUPPORT_TOL,
    DensityOperator,
    DimensionError,
    as_density,
    max_entangled,
    maximally_mixed,
    partial_trace,
    random_full_rank_state,
    tensor,
    tensor_power,
)

GRID_STEP = 1e-3
# Largest total dimension for an explicitly built mu (4**6 for qubit pairs).
DENSE_BUDGET = 4096
_GOLDEN = (math.sqrt(5) - 1) / 2


class InfeasibleError(ValueError):
    """No point of the searched family satisfies the error constraint."""


@dataclass(frozen=True, eq=False)
class TauFamilyPoint:
    p: float
    zeta: DensityOperator
    tau: DensityOperator


def tau_family(p: float, zeta: DensityOperator) -> TauFamilyPoint:
    """tau = p phi+_d + (1 - p) zeta, with zeta on dims [d, d]."""
    if not 0.0 <= p < 1.0:
        raise ValueError("p must lie in [0, 1)")
    zeta = as_density(zeta)
    d = zeta.dims[0]
    phi = max_entangled(d).density().mat
    tau = DensityOperator(p * phi + (1 - p) * zeta.mat, zeta.dims, validate=False)
    return TauFamilyPoint(p, zeta, tau)


def catalyst_state(tau: DensityOperator, n: int) -> DensityOperator:
    """tau^CS = tau^{(x) n-1}."""
    if n < 2:
        raise ValueError("the convex-split catalyst needs n >= 2")
    return tensor_power(tau, n - 1)


def convex_split_state(rho, tau, n: int, budget: int = DENSE_BUDGET) -> DensityOperator:
    """(1/n) sum_i tau (x) ... (x) rho_i (x) ... (x) tau, built densely."""
    rho, tau = as_density(rho), as_density(tau)
    if rho.dims != tau.dims:
        raise DimensionError(f"rho dims {rho.dims} differ from tau dims {tau.dims}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if rho.dim ** n > budget:
        raise MemoryError(f"dense mu of dimension {rho.dim}**{n} exceeds budget {budget}")
    total = 0
    for i in range(n):
        factors = [tau] * n
        factors[i] = rho
        total = total + tensor(*factors).mat
    return DensityOperator(total / n, rho.dims * n, validate=False)


def convex_split_bound(k: float, n: int) -> float:
    """sqrt(2**k / n) clipped to [0, 1]."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return min(1.0, math.sqrt(2.0 ** k / n))


def copies_for_error(k: float, epsilon: float) -> int:
    """ceil(2**(k+2) / eps) copies suffice for error eps."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return ceil_tol(2.0 ** (k + 2) / epsilon)


def protocol_error_bound(k: float, n: int, tau_phi_dist: float) -> float:
    """sqrt(2**k / n) + P(tau, phi+); its square bounds p_err^c."""
    if k < 0 or n < 1 or tau_phi_dist < 0:
        raise ValueError("inputs must be non-negative with n >= 1")
    return math.sqrt(2.0 ** k / n) + tau_phi_dist


def consumption_bound_cs(k: float, n: int) -> float:
    """Upper bound sqrt(2**k / n) on P(Tr_AB mu, tau^CS)."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return math.sqrt(2.0 ** k / n)


def min_copies_for_consumption(k: float, delta: float) -> int:
    """Smallest n with sqrt(2**k / n) <= delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return max(1, ceil_tol(2.0 ** k / delta ** 2))


def delta_p_err(choi, post_state) -> float:
    """Error reduction F(post, phi+_d) - F(choi, phi+_d)."""
    choi, post_state = as_density(choi), as_density(post_state)
    if choi.dim != post_state.dim:
        raise DimensionError("choi and post-processed state differ in dimension")
    phi = max_entangled(choi.dims[0])
    return uhlmann_fidelity(post_state, phi) - uhlmann_fidelity(choi, phi)


# --- n_min search ---------------------------------------------------------


class NMinResult(NamedTuple):
    n_min: int | None
    p_star: float
    k: float
    fidelity: float

    @property
    def feasible(self) -> bool:
        return self.n_min is not None


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")


def p_grid(step: float = GRID_STEP) -> np.ndarray:
    """{0, step, 2 step, ..., 1 - step}."""
    return np.arange(int(round(1.0 / step))) * step


def family_curve(choi, zeta, ps) -> tuple[np.ndarray, np.ndarray]:
    """D_max(choi || tau(p)) and F(tau(p), phi+) for every p, batched over p."""
    choi, zeta = as_density(choi), as_density(zeta)
    if choi.dims != zeta.dims:
        raise DimensionError(f"zeta dims {zeta.dims} differ from choi dims {choi.dims}")
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    d = choi.dims[0]
    phi_vec = max_entangled(d).amplitudes
    phi = np.outer(phi_vec, phi_vec.conj())
    taus = ps[:, None, None] * phi + (1 - ps)[:, None, None] * zeta.mat
    w, v = np.linalg.eigh(taus)
    if np.any(w[:, 0] <= SUPPORT_TOL * w[:, -1]):
        raise ValueError("tau(p) must be full rank; zeta is not full rank")
    s = (v / np.sqrt(w)[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    x = s @ choi.mat @ s
    lam = np.linalg.eigvalsh((x + np.conj(np.swapaxes(x, -1, -2))) / 2)[:, -1]
    fid = np.real(np.einsum("i,pij,j->p", phi_vec.conj(), taus, phi_vec))
    return np.log2(lam), np.clip(fid, 0.0, 1.0)


def copies_needed(k, fidelity, epsilon):
    """Real-valued n(p) = 2**k / (sqrt(eps) - sqrt(1 - F))**2; inf where infeasible."""
    k = np.asarray(k, dtype=float)
    gap = math.sqrt(epsilon) - np.sqrt(np.clip(1.0 - np.asarray(fidelity, dtype=float), 0.0, None))
    with np.errstate(divide="ignore"):
        return np.where(gap > 0, np.exp2(k) / np.where(gap > 0, gap, 1.0) ** 2, np.inf)


def _point(choi, zeta, p):
    k, f = family_curve(choi, zeta, [p])
    return float(k[0]), float(f[0])


def _refine(choi, zeta, epsilon, p0, step, iters=40):
    """One golden-section pass on n(p) over [p0 - step, p0 + step], kept inside [0, 1 - step]."""
    lo, hi = max(0.0, p0 - step), min(1.0 - step, p0 + step)

    def obj(p):
        k, f = _point(choi, zeta, p)
        return float(copies_needed(k, f, epsilon)), k, f

    a, b = lo, hi
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = obj(c), obj(d)
    for _ in range(iters):
        if fc[0] <= fd[0]:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = obj(d)
    return (c, fc) if fc[0] <= fd[0] else (d, fd)


def _n_min_from_curve(choi, zeta, epsilon, ps, ks, fs, refine, step) -> NMinResult:
    n_real = copies_needed(ks, fs, epsilon)
    i = int(np.argmin(n_real))
    if not math.isfinite(n_real[i]):
        return NMinResult(None, math.nan, math.nan, math.nan)
    best_n, best_p, best_k, best_f = float(n_real[i]), float(ps[i]), float(ks[i]), float(fs[i])
    if refine:
        p, (n_ref, k, f) = _refine(choi, zeta, epsilon, best_p, step)
        if n_ref < best_n:
            best_n, best_p, best_k, best_f = n_ref, p, k, f
    return NMinResult(max(1, ceil_tol(best_n)), best_p, best_k, best_f)


def n_min_for_zeta(choi, zeta, epsilon: float, step: float = GRID_STEP, refine: bool = True) -> NMinResult:
    """Smallest copy count over tau(p) = p phi+ + (1 - p) zeta.

    Grid search over p with spacing ``step`` followed by one golden-section pass
    around the best grid point.  ``n_min`` is ``None`` when no p satisfies the
    constraint.
    """
    _check_epsilon(epsilon)
    ps = p_grid(step)
    ks, fs = family_curve(choi, zeta, ps)
    return _n_min_from_curve(choi, zeta, epsilon, ps, ks, fs, refine, step)


@dataclass(frozen=True)
class DescentReport:
    n_mm: int
    n_best: int
    theta: float
    epsilon: float
    sample_count: int
    best_zeta_id: int = 0
    p_best: float = math.nan
    k_best: float = math.nan


def descent_ratio(n_mm: int, n_best: int) -> float:
    return (n_mm - n_best) / n_mm


def candidate_zetas(d: int, count: int, seed: int) -> list[DensityOperator]:
    """``count`` Ginibre states on [d, d]; candidate i uses spawned stream i,
    so the first N candidates are identical for every count >= N."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [
        random_full_rank_state(d * d, np.random.default_rng(c), dims=(d, d)) for c in children
    ]


def descent_sweep(
    choi,
    N: int,
    epsilons: Sequence[float],
    seed: int,
    step: float = GRID_STEP,
    refine: bool = True,
    include_benchmark: bool = True,
) -> list[DescentReport]:
    """Descent ratios theta(N, eps) for every eps in ``epsilons``.

    Candidate 0 is the maximally mixed zeta (the benchmark); candidates 1..N
    are seeded Ginibre states.  The benchmark is part of the pool unless
    ``include_benchmark`` is false.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    for e in epsilons:
        _check_epsilon(e)
    choi = as_density(choi)
    d = choi.dims[0]
    ps = p_grid(step)
    mm = maximally_mixed(d * d, (d, d))
    pool = [mm] + candidate_zetas(d, N, seed)
    curves = [family_curve(choi, z, ps) for z in pool]

    reports = []
    for eps in epsilons:
        bench = _n_min_from_curve(choi, mm, eps, ps, *curves[0], refine, step)
        if not bench.feasible:
            raise InfeasibleError(f"benchmark zeta = I/d^2 is infeasible at eps={eps}")
        best, best_id = None, None
        start = 0 if include_benchmark else 1
        for idx in range(start, len(pool)):
            if idx == 0:
                res = bench
            else:
                res = _n_min_from_curve(choi, pool[idx], eps, ps, *curves[idx], refine, step)
            if res.feasible and (best is None or res.n_min < best.n_min):
                best, best_id = res, idx
        if best is None:
            raise InfeasibleError(f"no candidate zeta is feasible at eps={eps}")
        reports.append(
            DescentReport(
                n_mm=bench.n_min,
                n_best=best.n_min,
                theta=descent_ratio(bench.n_min, best.n_min),
                epsilon=float(eps),
                sample_count=N,
                best_zeta_id=best_id,
                p_best=best.p_star,
                k_best=best.k,
            )
        )
    return reports


def n_min_random(choi, N: int, epsilon: float, seed: int, **kw) -> tuple[int, int, DescentReport]:
    """Best copy count over I/d^2 and N seeded random full-rank zetas.

    Returns ``(n_best, best_zeta_id, report)``; id 0 is the maximally mixed state.
    """
    report = descent_sweep(choi, N, [epsilon], seed, **kw)[0]
    return report.n_best, report.best_zeta_id, report


# --- direct checks --------------------------------------------------------


def lemma1_direct(rho, tau, n: int, budget: int = DENSE_BUDGET) -> tuple[float, float]:
    """(P(mu, tau^{(x) n}), sqrt(2**k / n)) with mu built densely."""
    rho, tau = as_density(rho), as_density(tau)
    k = dmax(rho, tau)
    mu = convex_split_state(rho, tau, n, budget)
    return purified_distance(mu, tensor_power(tau, n)), math.sqrt(2.0 ** k / n)


def consumption_direct(rho, tau, n: int, budget: int = DENSE_BUDGET) -> float:
    """P(Tr_AB mu, tau^CS) from the dense mu (slot 1 holds AB)."""
    rho, tau = as_density(rho), as_density(tau)
    if n < 2:
        raise ValueError("consumption needs n >= 2")
    mu = convex_split_state(rho, tau, n, budget)
    s = len(rho.dims)
    rest = partial_trace(mu, range(s, s * n))
    return purified_distance(rest, catalyst_state(tau, n))
