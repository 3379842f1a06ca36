"""Entanglement distribution over a depolarizing fibre.

Without help the Choi state is entangled only up to l = ln3 / alpha.  A relay
at distance s and a catalyst let the protocol reach further.
"""
import math

from catlab import tasks

alpha = 0.01
print("bare threshold ln3/alpha =", tasks.distribution_threshold_bare(alpha))
print("PPT bisection          =", tasks.ppt_boundary_length(alpha))

l = 250.0   # beyond 2 ln3 / alpha ~ 219.7
for s in (0.0, 40.0, 80.0, 120.0):
    prof = tasks.distribution_entanglement_profile(tasks.DistributionScenario(alpha, l, s), N=20, seed=1)
    print(f"s = {s:5.1f}: F = {prof.fidelity_bare:.3f}  witness = {prof.ppt_witness:+.3f}"
          f"  log2 dim: embezzle {2 * prof.embezzle_log2_rank:.1f}, convex split {prof.cs_log2_dim}")
