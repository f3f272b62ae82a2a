"""Two Calogero particles on a grid, with and without the complex rotation.

The rotated potential is complex, so the grid Hamiltonian is not
hermitian; its low levels still agree with the real problem and with the
closed form 2n + m + lambda + 1. A 41-point grid keeps this run short;
the acceptance test uses 61 points.
"""
import numpy as np

from pseudoherm import calogero as cg

g = cg.GridSpec(L=6.0, n=41, lam=2.0, phi=0.1)
e_H, e_h, e_odd, pt = cg.grid_spectra(g)
exact = cg.calogero_exact_spectrum(g.lam, 4)

print("grid dimension", g.dim, "spacing", round(g.spacing, 4))
print(f"PT residual of the rotated Hamiltonian  {pt:.1e}")
print(f"{'exact':>8} {'h (odd)':>10} {'Re H':>10} {'Im H':>10}")
# each level of the real problem appears twice (both orderings of the particles)
for k in range(4):
    E = e_H[2 * k]
    print(f"{exact[k]:8.3f} {e_odd[k]:10.4f} {E.real:10.4f} {E.imag:10.1e}")
print(f"relative deviation from the closed form {np.max(np.abs(e_odd[:4] - exact) / exact):.2%}")
