"""Reduced-size invariant suites run by ``catlab selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import channels, convexsplit, distinguish, embezzle, qmat, tasks


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    messages: list = field(default_factory=list)

    def check(self, ok: bool, what: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            self.messages.append(what)


def _rng(seed, i):
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(i + 1)[i])


def suite_qmat(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("qmat")
    rng = np.random.default_rng(seed)
    for i in range(n):
        # integer entries keep every product exact, so equality is bitwise
        x, y, z = (rng.integers(-9, 10, (k, k)) + 1j * rng.integers(-9, 10, (k, k)) for k in (2, 3, 2))
        lhs = qmat.tensor(qmat.tensor(x, y), z)
        rhs = qmat.tensor(x, qmat.tensor(y, z))
        r.check(np.array_equal(lhs, rhs), f"tensor associativity #{i}")
        a = qmat.random_density(2, rng)
        b = qmat.random_density(3, rng)
        ab = qmat.tensor(a, b)
        r.check(np.allclose(qmat.partial_trace(ab, [0]).mat, a.mat, atol=1e-12), f"partial trace #{i}")
        h = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        h = h + h.conj().T
        w, v = qmat.hermitian_eig(h)
        r.check(np.linalg.norm(v @ np.diag(w) @ v.conj().T - h) < 1e-10, f"eig reconstruction #{i}")
        s = qmat.random_full_rank_state(4, rng)
        r.check(abs(np.trace(s.mat).real - 1) < 1e-12 and np.linalg.eigvalsh(s.mat)[0] > 0, f"full-rank state #{i}")
    return r


def suite_distinguish(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("distinguish")
    rng = np.random.default_rng(seed)
    for i in range(n):
        x, y, z = (qmat.random_density(4, rng, dims=(2, 2)) for _ in range(3))
        f_xy, f_yx = distinguish.uhlmann_fidelity(x, y), distinguish.uhlmann_fidelity(y, x)
        r.check(abs(f_xy - f_yx) < 1e-10, f"fidelity symmetry #{i}")
        p = distinguish.purified_distance
        r.check(p(x, y) <= p(x, z) + p(z, y) + 1e-9, f"triangle inequality #{i}")
        k = distinguish.dmax(x, y)
        r.check(distinguish.dmax_feasibility_check(x, y, k + 1e-6), f"dmax feasible above #{i}")
        r.check(not distinguish.dmax_feasibility_check(x, y, k - 1e-3), f"dmax infeasible below #{i}")
        xa, ya = qmat.partial_trace(x, [0]), qmat.partial_trace(y, [0])
        r.check(distinguish.dmax(xa, ya) <= k + 1e-9, f"dmax data processing #{i}")
        r.check(p(xa, ya) <= p(x, y) + 1e-9, f"purified distance data processing #{i}")
        h = distinguish.von_neumann_entropy(x)
        r.check(-1e-12 <= h <= 2 + 1e-12, f"entropy range #{i}")
    return r


def suite_channels(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("channels")
    rng = np.random.default_rng(seed)
    for p in np.linspace(0, 1, n):
        for ch in (channels.dephasing(p), channels.amplitude_damping(p), channels.depolarizing_length(0.1, 10 * p)):
            r.check(channels.is_trace_preserving(ch), f"{ch.name} completeness p={p}")
            c = channels.choi(ch)
            r.check(np.allclose(qmat.partial_trace(c, [0]).mat, np.eye(2) / 2, atol=1e-10), f"{ch.name} marginal p={p}")
            a, b = qmat.random_density(2, rng), qmat.random_density(2, rng)
            t = rng.uniform()
            lhs = channels.apply(ch, qmat.mix([t, 1 - t], [a, b])).mat
            rhs = t * channels.apply(ch, a).mat + (1 - t) * channels.apply(ch, b).mat
            r.check(np.allclose(lhs, rhs, atol=1e-10), f"{ch.name} linearity p={p}")
    return r


def suite_convexsplit(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("convexsplit")
    for i in range(n):
        rng = _rng(seed, i)
        rho = qmat.random_density(4, rng, rank=int(rng.integers(1, 5)), dims=(2, 2))
        tau = qmat.random_full_rank_state(4, rng, dims=(2, 2))
        for copies in (1, 2, 3):
            dist, bound = convexsplit.lemma1_direct(rho, tau, copies)
            r.check(dist <= bound + 1e-9, f"lemma1 case {i} n={copies}")
    c = channels.choi(channels.dephasing(0.4))
    prev = None
    for eps in (0.05, 0.1, 0.2, 0.4):
        res = convexsplit.n_min_for_zeta(c, qmat.maximally_mixed(4, (2, 2)), eps)
        lhs = math.sqrt(2 ** res.k / res.n_min) + math.sqrt(1 - res.fidelity)
        r.check(lhs <= math.sqrt(eps) + 1e-9, f"n_min constraint eps={eps}")
        r.check(prev is None or res.n_min <= prev, f"n_min monotone eps={eps}")
        prev = res.n_min
    return r


def suite_embezzle(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("embezzle")
    for m in (2, 3):
        for M in range(m, m + 4 * n):
            r.check(embezzle.unitary_transport_check(m, M), f"transport m={m} M={M}")
            fr = embezzle.protocol_fidelity(m, M)
            if M > m:
                r.check(fr.inner_product >= fr.inner_product_bound - 1e-12, f"overlap bound m={m} M={M}")
            rec = embezzle.consumption_exact(m, M)
            r.check(rec.direct <= rec.bound + 1e-9, f"consumption bound m={m} M={M}")
            r.check(rec.consistent, f"closed form consumption m={m} M={M}")
    m, eps = 2, 0.19
    M = embezzle.required_schmidt_rank(m, eps)
    r.check(1 - embezzle.protocol_fidelity(m, M).fidelity <= eps, "end-to-end error m=2 eps=0.19")
    return r


def suite_tasks(seed: int, n: int) -> SuiteResult:
    r = SuiteResult("tasks")
    prev = -math.inf
    for M in [2 ** i for i in range(1, 11)]:
        c = tasks.sdc_capacity(tasks.catalytic_sdc_state(2, M)).value
        r.check(c >= prev - 1e-12 and 0 <= c <= 2 + 1e-9, f"sdc monotone M={M}")
        prev = c
    for alpha in (0.005, 0.01, 0.05):
        l = tasks.ppt_boundary_length(alpha)
        ref = tasks.distribution_threshold_bare(alpha)
        r.check(abs(l - ref) / ref < 1e-6, f"ppt threshold alpha={alpha}")
    return r


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "qmat": suite_qmat,
    "distinguish": suite_distinguish,
    "channels": suite_channels,
    "convexsplit": suite_convexsplit,
    "embezzle": suite_embezzle,
    "tasks": suite_tasks,
}


def selftest(seed: int = 2024, size: int = 10) -> list[SuiteResult]:
    return [fn(seed, size) for fn in SUITES.values()]
