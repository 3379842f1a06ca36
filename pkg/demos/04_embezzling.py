"""Embezzling a Bell pair out of |tau^E> with a single local permutation."""
from catlab import embezzle as E

s = E.embezzling_state(3)
print("c_3 =", s.c_M, " coefficients:", s.coefficients)

# the permutation moves omega onto phi+_m (x) tau^E exactly
print("transport (2,3):", E.unitary_transport_check(2, 3))

for M in (3, 16, 128, 1024, 2**20):
    fr = E.protocol_fidelity(2, M)
    print(f"M = {M:8d}: fidelity {fr.fidelity:.5f}  overlap {fr.inner_product:.5f} >= {fr.inner_product_bound:.5f}")

M = E.required_schmidt_rank(2, 0.19)
print("rank needed for eps=0.19:", M, " p_err =", 1 - E.protocol_fidelity(2, M).fidelity)

# the catalyst is disturbed, but less and less as M grows
for M in (8, 32, 128):
    rec = E.consumption_exact(2, M)
    print(f"M = {M:4d}: P(xi, tau) = {rec.exact:.4f} (dense {rec.direct:.4f}) <= {rec.bound:.4f}")
