"""Noisy qubit channels and their Choi states."""
import math

import numpy as np

from catlab import channels, qmat, distinguish as D

np.set_printoptions(precision=4, suppress=True)
phi = qmat.max_entangled(2)

for p in (1.0, 0.75, 0.4):
    c = channels.choi(channels.dephasing(p))
    print(f"dephasing p={p}: F(choi, phi+) = {D.uhlmann_fidelity(c, phi):.4f}")

c = channels.choi(channels.amplitude_damping(0.65))
print("amplitude damping p=0.65, Choi spectrum:", np.linalg.eigvalsh(c.mat))
print("Tr_B choi =\n", qmat.partial_trace(c, [0]).mat.real)

# depolarizing over a fibre of length l: the phi+ weight decays as exp(-alpha l)
alpha = 0.01
for l in (0.0, 50.0, 100 * math.log(3), 200.0):
    c = channels.choi(channels.depolarizing_length(alpha, l))
    print(f"l = {l:7.2f}  F = {D.uhlmann_fidelity(c, phi):.4f}  PPT witness = {D.ppt_min_eigenvalue(c):+.4f}")
