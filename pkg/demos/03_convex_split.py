"""Convex-split catalysts: the lemma, and how a better reference state shrinks the catalyst.

tau(p) = p phi+ + (1 - p) zeta.  With zeta = I/4 we get the benchmark copy
count; random full-rank zetas usually do better, which is the descent ratio.
"""
import math

import numpy as np

from catlab import channels, convexsplit as cs, qmat, distinguish as D

rng = np.random.default_rng(3)
rho = qmat.random_density(4, rng, rank=2, dims=(2, 2))
tau = qmat.random_full_rank_state(4, rng, dims=(2, 2))
for n in (1, 2, 3, 4):
    dist, bound = cs.lemma1_direct(rho, tau, n)
    print(f"n={n}: P(mu, tau^n) = {dist:.4f} <= sqrt(2^k/n) = {bound:.4f}")

choi = channels.choi(channels.dephasing(0.4))
mm = qmat.maximally_mixed(4, (2, 2))
for eps in (0.05, 0.2, 0.5):
    res = cs.n_min_for_zeta(choi, mm, eps)
    print(f"eps={eps}: n_min(I/4) = {res.n_min} at p* = {res.p_star:.4f}, k = {res.k:.4f}")

# step=0.01 keeps this quick; the experiments use the finer default grid
reports = cs.descent_sweep(choi, 50, [0.05, 0.2, 0.5], seed=20240601, step=0.01)
for r in reports:
    print(f"eps={r.epsilon}: n_mm = {r.n_mm}, n_best = {r.n_best}, theta = {r.theta:.3f} (zeta #{r.best_zeta_id})")

print("copies sufficient for k=1, eps=0.25:", cs.copies_for_error(1, 0.25))
