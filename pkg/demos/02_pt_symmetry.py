"""Spin-space PT symmetry and the field condition B/A = tan(theta/2).

The reflection at angle theta combined with complex conjugation leaves the
exchange part invariant; the transverse fields survive only when their
ratio matches the reflection angle.
"""
import math

import numpy as np

from pseudoherm import spin_chain as sc

rng = np.random.default_rng(2)
base = sc.random_chain_params(5, rng)

print(f"{'theta':>8} {'conforming':>12} {'ratio+0.5':>12} {'no fields':>12}")
for theta in (math.pi / 6, math.pi / 2, 2 * math.pi / 3):
    t = math.tan(theta / 2)
    rows = []
    for B in (base.A * t, base.A * (t + 0.5)):
        rows.append(sc.pt_residual(sc.build_asymmetric_xxz(sc.with_params(base, B=B)), theta))
    rows.append(sc.pt_residual(sc.build_asymmetric_xxz(sc.with_params(base, A=0.0, B=0.0)), theta))
    print(f"{theta:8.4f} {rows[0]:12.2e} {rows[1]:12.2e} {rows[2]:12.2e}")

# the general chain: independent bond biases and complex fields
theta = math.pi / 2
conf = sc.with_params(base, B=base.A)
tp = sc.tilde_from_chain(conf, theta)
args = (tp.alphaR, tp.alphaI, tp.betaR, tp.betaI, theta)
print()
print("general chain built from a conforming asymmetric chain:")
print(f"  PT residual                 {sc.pt_residual(sc.build_general_pt(tp), theta):.2e}")
print(f"  betaR/alphaR = -alphaI/betaI = tan(theta/2):  {sc.pt_condition_general(*args)}")
print(f"  with alphaR in the second ratio instead:      {sc.pt_condition_general_printed(*args)}")
