"""Complex rotation of two oscillator coordinates.

The similarity transform exp(gamma L12) x1 exp(-gamma L12) produces
cosh(gamma) x1 + i sinh(gamma) x2: a complex rotation that keeps the
canonical commutators and the angular momentum. Everything is checked in
a truncated two-mode Fock space away from the truncation edge.
"""
import numpy as np

from pseudoherm import calogero as cg

rep = cg.build_fock_rep(20)
gamma = 0.3
m = cg.rotation_metric(rep, gamma)

print("Fock basis dimension", rep.dim)
print(f"L12 eigenvalues are integers to     {cg.integer_spectrum_deviation(rep):.1e}")
print(f"rho^-1 x rho = deformed x to        {cg.conjugation_check(rep, gamma):.1e}")
print(f"[X_i, P_j] = i delta_ij to          {cg.interior_commutator_deviation(rep, gamma):.1e}")
print(f"X1 P2 - X2 P1 = L12 to              {cg.l12_identity_deviation(rep, gamma):.1e}")
eig = np.linalg.eigvalsh(m.eta)
print(f"metric eigenvalues in [{eig.min():.3e}, {eig.max():.3e}] (positive definite)")
