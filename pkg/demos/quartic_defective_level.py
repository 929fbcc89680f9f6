"""The j = 1/2, B = 4 quartic block is a Jordan block.

Its only eigenvalue E = 2 is doubly degenerate with one eigenvector, and
the shooting mismatch has a double zero there.
"""
import numpy as np

from ptqes import qes, shoot
from ptqes.potentials import build_quartic_qes

block = qes.quartic_block(0.5, 4.0)
print("block matrix:\n", block.matrix)
(level,) = qes.solve_block(block)
print("E =", level.energy, "algebraic", level.algebraic_multiplicity, "geometric", level.geometric_multiplicity)

v = build_quartic_qes(0.5, 4.0, eps=1.0)
c = shoot.default_contour(v)
for dE in (0.1, 0.01, 0.001):
    print(f"|mismatch(2 + {dE})| = {abs(shoot.mismatch(v, 2 + dE, c)):.3e}")

for seed in (1.5, 2.3, 2 + 0.3j):
    r = shoot.refine(v, seed, c)
    print(f"seed {seed}: E = {r.E:.9f} after {r.iterations} steps, residual {r.residual:.1e}")

x = np.linspace(-4, 4, 9)
print("\nQES eigenfunction |psi| on a coarse grid:", np.round(np.abs(qes.qes_wavefunction(level, block, x, 1.0)), 5))
