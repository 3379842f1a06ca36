"""Superdense coding with the embezzled two-qubit state."""
import math

from catlab import tasks

for d in (2, 3):
    print(f"d = {d}, upper bound 2 log d = {2 * math.log2(d):.4f}")
    for M in (d, 8, 64, 1024):
        if M < d:
            continue
        c = tasks.sdc_capacity(tasks.catalytic_sdc_state(d, M))
        print(f"   M = {M:5d}  C = {c.value:.5f}  H(A|B) = {c.conditional_entropy:+.5f}")
