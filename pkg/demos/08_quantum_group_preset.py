"""The preset Gamma = 1, Delta = cosh q, C_1 = -C_N = -sinh q.

Subtracting Delta from the hermitian chain gives the open XXZ chain with
boundary fields; its deformation is isospectral. With spin-1/2 operators
S = sigma/2 the boundary field that commutes with the quantum group is
sinh(q)/2; this demo prints the degeneracy pattern of both chains.
"""
import numpy as np

from pseudoherm import linop
from pseudoherm import spin_chain as sc

q, N = 0.6, 5
p = sc.preset("su_q2", N=N, q=q, w=np.linspace(0.3, -0.3, N))
h = sc.build_hermitian_xxz(p)
H = sc.build_asymmetric_xxz(p)
eh, _ = linop.eig_hermitian(h)

print(f"deformed vs hermitian spectrum   {linop.match_spectra(linop.eig_general(H), eh, 1e-8)[1]:.1e}")
print(f"ground energy of h - Delta       {eh.real[0] - p.offset:.6f}")
print("multiplets with C = +-sinh q:    ", sorted(sc.multiplet_structure(eh.real, 1e-9)))
half = sc.with_params(p, C=p.C / 2)
e_half = np.linalg.eigvalsh(sc.build_hermitian_xxz(half))
print("multiplets with C = +-sinh(q)/2: ", sorted(sc.multiplet_structure(e_half, 1e-9)))

flat = sc.preset("su_q2", N=N, q=0.0)
print("q = 0: Delta =", flat.Delta, " fields", flat.C + 0.0)
