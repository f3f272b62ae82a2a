"""Haldane-Shastry chain and its deformation.

Replacing every spin by the deformed operator T_i keeps the SU(2)
algebra, so the deformed long-range chain is isospectral to the original
with its large degeneracies intact.
"""
import numpy as np

from pseudoherm import linop
from pseudoherm import spin_chain as sc

N = 6
w = np.random.default_rng(4).uniform(-1, 1, N)
h = sc.build_haldane_shastry(N)
H = sc.build_haldane_shastry(N, deformed=True, w=w)

eh, _ = linop.eig_hermitian(h)
eH = linop.eig_general(H).sorted()
print(f"non-hermiticity of deformed chain  {linop.hermiticity_residual(H):.3f}")
print(f"spectrum difference                {linop.match_spectra(eH, eh, 1e-8)[1]:.2e}")
print("levels and degeneracies of the undeformed chain:")
levels = np.round(eh.real, 8)
for value in np.unique(levels):
    print(f"  {value:10.6f}  x{int(np.sum(levels == value))}")
