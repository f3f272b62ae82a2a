"""Time evolution under a non-hermitian but eta-hermitian Hamiltonian.

The ordinary norm of the state oscillates, the eta-norm stays fixed, and
the propagator is related to the hermitian one by the same similarity.
"""
import numpy as np

from pseudoherm import evolution as ev
from pseudoherm import spin_chain as sc

rng = np.random.default_rng(7)
p = sc.random_chain_params(6, rng)
H, h, m = sc.build_asymmetric_xxz(p), sc.build_hermitian_xxz(p), p.metric()
psi0 = rng.normal(size=64) + 1j * rng.normal(size=64)

trace = ev.norm_trace(H, m, psi0, np.linspace(0.0, 10.0, 11))
print(f"{'t':>5} {'|psi|^2':>12} {'<psi,eta psi>':>14}")
for t, d, e in zip(trace.times, trace.dirac_norms, trace.eta_norms):
    print(f"{t:5.1f} {d:12.5f} {e:14.10f}")
print(f"eta-norm drift        {trace.eta_drift:.1e}")
print(f"Dirac-norm variation  {trace.dirac_variation:.2f}")
print(f"rho U_H rho^-1 - U_h  {ev.propagator_intertwine_residual(H, h, m, 1.0):.1e}")
