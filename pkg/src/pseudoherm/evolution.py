"""Time evolution under eta-hermitian Hamiltonians.

Propagators are full dense matrix exponentials ``exp(-i H t)``, so norm
drift reflects the Hamiltonian, not an integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linop
from .errors import UsageError
from .metric import Metric, eta_norm


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray
    dirac_norms: np.ndarray
    eta_norms: np.ndarray
    state_dim: int

    @property
    def eta_drift(self) -> float:
        """Largest ``|N_eta(t) - N_eta(0)| / N_eta(0)``."""
        return float(np.max(np.abs(self.eta_norms - self.eta_norms[0])) / self.eta_norms[0])

    @property
    def dirac_variation(self) -> float:
        return float(np.max(np.abs(self.dirac_norms - self.dirac_norms[0])) / self.dirac_norms[0])


def _state(psi, dim):
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.size != dim:
        raise UsageError(f"state of length {psi.size} does not match operator dimension {dim}")
    if not np.any(psi):
        raise UsageError("initial state is zero")
    return psi


def propagator(H, t: float) -> np.ndarray:
    return linop.expm(-1j * float(t) * linop.as_operator(H, "H"))


def evolve(H, psi0, t: float) -> np.ndarray:
    """``exp(-i H t) psi0``; ``t = 0`` returns a copy of ``psi0``."""
    H = linop.as_operator(H, "H")
    psi0 = _state(psi0, H.shape[0])
    if t == 0:
        return psi0.copy()
    return propagator(H, t) @ psi0


def norm_trace(H, m: Metric, psi0, times) -> EvolutionTrace:
    """Squared Dirac and eta norms of ``psi(t)`` on the requested times."""
    H = linop.as_operator(H, "H")
    psi0 = _state(psi0, H.shape[0])
    if m.dim != H.shape[0]:
        raise UsageError(f"metric dimension {m.dim} does not match operator {H.shape[0]}")
    times = np.asarray(times, dtype=float).ravel()
    dirac = np.empty(times.size)
    eta = np.empty(times.size)
    for k, t in enumerate(times):
        psi = evolve(H, psi0, t)
        dirac[k] = np.vdot(psi, psi).real
        eta[k] = eta_norm(psi, m)
    return EvolutionTrace(times, dirac, eta, H.shape[0])


def intertwine_residual(H, h, m: Metric) -> float:
    """``max|rho H rho^{-1} - h| / max|h|``."""
    H = linop.as_operator(H, "H")
    h = linop.as_operator(h, "h")
    if H.shape != h.shape or H.shape != m.eta.shape:
        raise UsageError("H, h and the metric must share one dimension")
    scale = linop.max_norm(h)
    diff = linop.max_norm(m.rho @ H @ m.rho_inv - h)
    return diff / scale if scale else diff


def propagator_intertwine_residual(H, h, m: Metric, t: float = 1.0) -> float:
    """``max|rho exp(-iHt) rho^{-1} - exp(-iht)| / max|exp(-iht)|``."""
    U_h = propagator(h, t)
    return linop.max_norm(m.rho @ propagator(H, t) @ m.rho_inv - U_h) / linop.max_norm(U_h)


def eigenvector_map_residual(H, h, m: Metric, count: int = 5) -> float:
    """Check that ``rho^{-1} v`` is an eigenvector of ``H`` for the lowest eigenvectors ``v`` of ``h``.

    Returns the largest ``|H u - E u| / |u|`` with ``u = rho^{-1} v``, relative to ``max|h|``.
    """
    spec, vecs = linop.eig_hermitian(h)
    worst = 0.0
    for k in range(min(count, len(spec))):
        u = m.rho_inv @ vecs[:, k]
        r = np.linalg.norm(H @ u - spec.values[k].real * u) / np.linalg.norm(u)
        worst = max(worst, float(r))
    return worst / linop.max_norm(h)
