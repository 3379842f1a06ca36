"""Fidelity, purified distance and D_max on a few hand-picked states."""
import numpy as np

from catlab import qmat, distinguish as D
from catlab.qmat import DensityOperator

zero = DensityOperator(np.diag([1.0, 0.0]), (2,))
half = qmat.maximally_mixed(2)

print("F(I/2, |0><0|)  =", D.uhlmann_fidelity(half, zero))    # 0.5
print("P(I/2, |0><0|)  =", D.purified_distance(half, zero))   # sqrt(0.5)
print("Dmax(|0><0|, I/2) =", D.dmax(zero, half))              # 1
print("Dmax(I/2, |0><0|) =", D.dmax(half, zero))              # support violated -> inf

# Bell state: maximal entanglement shows up in both H(A|B) and the partial transpose
phi = qmat.max_entangled(2)
print("H(A|B) of phi+  =", D.conditional_entropy(phi))
print("min eig of phi+^T_B =", D.ppt_min_eigenvalue(phi))

# the isotropic state with weight 1/3 sits exactly on the separability boundary
iso = DensityOperator(phi.density().mat / 3 + (2 / 3) * np.eye(4) / 4, (2, 2))
print("PPT witness, isotropic 1/3 =", round(D.ppt_min_eigenvalue(iso), 15))

# D_max is the smallest lambda with rho <= 2^lambda sigma
rng = np.random.default_rng(0)
a, b = (qmat.random_full_rank_state(4, rng) for _ in range(2))
k = D.dmax(a, b)
print(f"Dmax = {k:.6f}; feasible at k+1e-6: {D.dmax_feasibility_check(a, b, k + 1e-6)},"
      f" at k-1e-3: {D.dmax_feasibility_check(a, b, k - 1e-3)}")
