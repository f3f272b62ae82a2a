"""A non-hermitian spin chain with a real spectrum.

The asymmetric XXZ chain below is not hermitian, yet its spectrum is real:
a positive metric ``eta`` makes it hermitian with respect to a modified
inner product, and ``rho = sqrt(eta)`` maps it onto a hermitian partner.
"""
import numpy as np

from pseudoherm import linop, metric
from pseudoherm import spin_chain as sc

rng = np.random.default_rng(1)
p = sc.random_chain_params(6, rng)
H = sc.build_asymmetric_xxz(p)
h = sc.build_hermitian_xxz(p)
m = p.metric()

print("N =", p.N, " dimension", H.shape[0])
print("deformation w:", np.round(p.w, 3))
print(f"Dirac hermiticity residual of H   {linop.hermiticity_residual(H):.3f}")
print(f"eta H - H^dagger eta (relative)   {metric.pseudo_hermiticity_residual(H, m):.2e}")
print(f"rho H rho^-1 - h (relative)       {linop.max_norm(m.rho @ H @ m.rho_inv - h) / linop.max_norm(h):.2e}")

spec_H = linop.eig_general(H).sorted()
spec_h, _ = linop.eig_hermitian(h)
print(f"largest |Im E| of H               {spec_H.max_imag:.2e}")
print(f"spectra of H and h agree to       {linop.match_spectra(spec_H, spec_h, 1e-8)[1]:.2e}")
print("lowest levels:", np.round(spec_H.real[:5], 6))

# the same H written through the deformed spin operators T_i = rho^-1 S_i rho
T_route = sc.asymmetric_xxz_from_deformed_spins(p)
print(f"deformed-spin construction agrees {linop.max_norm(T_route - H):.2e}")
