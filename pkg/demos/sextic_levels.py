"""Barrier sextic: algebraic levels, shooting, and the SUSY partner.

Run with ``python demos/sextic_levels.py``.
"""
import numpy as np

from ptqes import qes, shoot
from ptqes.potentials import SexticBarrierParams, build_barrier_sextic, build_polynomial

a, gamma = 2.0, 1.0

# algebraic part of the spectrum for a few block sizes
for j in (0, 0.5, 1):
    levels = qes.solve_block(qes.sextic_block(j, a, gamma))
    print(f"j = {j}: block energies", np.round(levels.energies, 8), "all real:", levels.all_real)

# the same potential on the line Im t = 1, solved numerically
v = build_barrier_sextic(SexticBarrierParams(a, gamma, 0.5), eps=1.0)
found = shoot.scan(v, shoot.default_contour(v), (-3, 20), 40)
print("\nshooting, j = 1/2:")
for r in found:
    print(f"  E = {r.E.real:+.10f} {r.E.imag:+.1e}i   residual {r.residual:.1e}")

# j = 0: everything above the ground level comes from the partner x^6 + 4x^4 + 9x^2 + 6
v0 = build_barrier_sextic(SexticBarrierParams(a, gamma, 0.0), eps=1.0)
partner = build_polynomial([3 * a, 0, a * a + 5, 0, 2 * a, 0, 1])
lower = np.array([r.E for r in shoot.scan(v0, shoot.default_contour(v0), (-3, 25), 30)])[:4]
upper = np.array([r.E for r in shoot.scan(partner, shoot.default_contour(partner), (0, 27), 30)])[:3]
print("\nj = 0 levels        ", np.round(lower.real, 8))
print("-2 + partner levels ", np.round(np.r_[-2.0, -2.0 + upper.real], 8))

fd = shoot.fd_spectrum(v0, shoot.ContourSpec(eps=1.0, L=4.0, N=1000), 4, n_points=600)
print("finite differences  ", np.round(fd.real, 4))
