"""A real quartic partner built from a complex superpotential.

The pole-free rational W has a real V- once (f, beta) satisfy two reality
conditions.  Its zero mode and the complex conjugate are both solutions.
"""
import numpy as np

from ptqes import shoot, susy
from ptqes.algebra import evaluate

g = -(2 ** (2 / 3)) * 3 ** (-2 / 3)
for f, beta in susy.reality_constraint_roots(g):
    print(f"g = {g:.6f}: f = {f:.8f}, beta = {beta:.8f}, 3g^2 = {3 * g * g:.8f}")

f, beta = susy.reality_constraints(g)
w = susy.quartic_rational_superpotential(beta, f, g)
vm, vp = susy.partners(w)

x = np.linspace(-4, 4, 8001)
print("max |Im V-| on [-4, 4]:", np.max(np.abs(evaluate(vm, x).imag)))
print("max |Im V+| on [-4, 4]:", np.max(np.abs(evaluate(vp, x).imag)))

psi = susy.ground_state(w)(x)
for name, p in (("psi0", psi), ("conj(psi0)", np.conj(psi))):
    res, norm = shoot.residual_and_norm(vm, x, p, 0.0)
    print(f"{name:>10}: residual at E = 0 {res:.1e}, norm on [-4, 4] {norm:.6f}")

overlap = abs(np.vdot(psi, np.conj(psi))) / np.vdot(psi, psi).real
print("|<psi0, conj psi0>| / |psi0|^2 =", round(overlap, 6), "(1 would mean proportional)")

# |psi0|^2 falls off like 1/x^2, so truncated norms approach the limit like 1/L
exact = np.pi / (2 * np.sqrt(f)) * (1 + g * g / f)
for L in (25, 50, 100, 200):
    xs = np.linspace(-L, L, 200 * L + 1)
    n2 = shoot.discrete_norm(xs, susy.ground_state(w)(xs)) ** 2
    print(f"L = {L:4d}: N^2 = {n2:.6f}  (limit - N^2) * L = {(exact - n2) * L:.4f}")
print("limit:", exact)
