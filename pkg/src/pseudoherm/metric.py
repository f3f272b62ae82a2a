"""Positive-definite metrics, the modified inner product and observable dressing.

A :class:`Metric` bundles ``eta`` with its positive square root ``rho`` and
``rho_inv``. Two families are built from an explicit generator (the
per-site ``S^z`` product for spin chains, the planar rotation generator for
the two-mode oscillator); :func:`metric_from_eta` covers anything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linop
from .errors import CapacityError, DefinitenessError, UsageError

#: eta is rejected when min eig <= PD_RTOL * max eig.
PD_RTOL = 1e-12


@dataclass(frozen=True)
class Metric:
    eta: np.ndarray
    rho: np.ndarray
    rho_inv: np.ndarray
    params: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.eta.shape[0]


def _check_pd(eigs, what):
    eigs = np.asarray(eigs, dtype=float)
    lo, hi = float(eigs.min()), float(eigs.max())
    if not lo > PD_RTOL * hi:
        raise DefinitenessError(f"{what}: min eigenvalue {lo:.3e} vs max {hi:.3e} is not positive definite")


def metric_from_eta(eta, params=None) -> Metric:
    """Wrap an arbitrary hermitian PD matrix; ``rho`` from its eigen-decomposition."""
    eta = linop.as_operator(eta, "eta")
    if linop.hermiticity_residual(eta) > 1e-12:
        raise DefinitenessError("metric is not hermitian")
    w, v = np.linalg.eigh(0.5 * (eta + linop.adjoint(eta)))
    _check_pd(w, "metric")
    rho = (v * np.sqrt(w)) @ linop.adjoint(v)
    rho_inv = (v / np.sqrt(w)) @ linop.adjoint(v)
    return Metric(eta, rho, rho_inv, dict(params or {}, generator="matrix"))


def site_sz_diagonal(n_sites: int) -> np.ndarray:
    """``(2^N, N)`` array of ``S^z_i`` eigenvalues (+1/2 for up) per basis state.

    Site 1 is the leftmost tensor factor and up is the first basis vector.
    """
    idx = np.arange(2**n_sites)
    bits = (idx[:, None] >> np.arange(n_sites - 1, -1, -1)[None, :]) & 1
    return 0.5 - bits


def build_spin_metric(n_sites: int, gamma) -> Metric:
    """``eta = prod_i exp(-2 gamma_i S^z_i)``, diagonal in the computational basis."""
    if n_sites < 1:
        raise UsageError("n_sites must be >= 1")
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.size != n_sites:
        raise UsageError(f"gamma has length {gamma.size}, expected {n_sites}")
    if 2**n_sites > linop.MAX_DIM:
        raise CapacityError(f"spin metric dimension 2^{n_sites} too large", dim=2**n_sites)
    exponent = site_sz_diagonal(n_sites) @ gamma
    diag_eta = np.exp(-2.0 * exponent)
    _check_pd(diag_eta, "spin metric")
    return Metric(
        np.diag(diag_eta).astype(np.complex128),
        np.diag(np.exp(-exponent)).astype(np.complex128),
        np.diag(np.exp(exponent)).astype(np.complex128),
        {"generator": "spin_sz", "gamma": gamma.tolist()},
    )


def build_rotation_metric(gamma: float, L12) -> Metric:
    """``eta = exp(-2 gamma L12)`` for a hermitian generator ``L12``.

    ``rho = exp(-gamma L12)`` is taken from the exponential form and
    cross-checked against the eigen-decomposition square root of ``eta``.
    """
    L12 = linop.as_operator(L12, "L12")
    if linop.hermiticity_residual(L12) > 1e-10:
        raise DefinitenessError("rotation generator is not hermitian; exp(-2 gamma L12) need not be PD")
    gamma = float(gamma)
    m = np.linalg.eigvalsh(0.5 * (L12 + linop.adjoint(L12)))
    _check_pd(np.exp(-2.0 * gamma * m), "rotation metric")
    eta = linop.expm(-2.0 * gamma * L12)
    eta = 0.5 * (eta + linop.adjoint(eta))
    rho = linop.expm(-gamma * L12)
    rho_inv = linop.expm(gamma * L12)
    root = linop.sqrtm_pd(eta, rtol=PD_RTOL)
    if linop.max_norm(root - rho) > 1e-9 * linop.max_norm(rho):
        raise DefinitenessError("exponential and eigen-decomposition square roots of eta disagree")
    return Metric(eta, rho, rho_inv, {"generator": "L12", "gamma": gamma})


def dress(b, m: Metric) -> np.ndarray:
    """``rho^{-1} B rho``: maps Dirac-hermitian ``B`` to an eta-hermitian operator."""
    b = linop.as_operator(b, "B")
    if b.shape != m.eta.shape:
        raise UsageError(f"dimension mismatch: operator {b.shape[0]} vs metric {m.dim}")
    return m.rho_inv @ b @ m.rho


def undress(b, m: Metric) -> np.ndarray:
    """Inverse of :func:`dress`: ``rho B rho^{-1}``."""
    b = linop.as_operator(b, "B")
    if b.shape != m.eta.shape:
        raise UsageError(f"dimension mismatch: operator {b.shape[0]} vs metric {m.dim}")
    return m.rho @ b @ m.rho_inv


def eta_inner(u, v, m: Metric) -> complex:
    """``<u, eta v>``, conjugate-linear in ``u``."""
    u = np.asarray(u, dtype=np.complex128).ravel()
    v = np.asarray(v, dtype=np.complex128).ravel()
    if u.size != m.dim or v.size != m.dim:
        raise UsageError(f"state dimensions {u.size}, {v.size} do not match metric {m.dim}")
    return complex(np.vdot(u, m.eta @ v))


def eta_norm(v, m: Metric) -> float:
    """Squared eta-length ``<v, eta v>`` (real part)."""
    return eta_inner(v, v, m).real


def pseudo_hermiticity_residual(H, m: Metric) -> float:
    """``max|eta H - H^dagger eta| / (max|eta| max|H|)``."""
    H = linop.as_operator(H, "H")
    if H.shape != m.eta.shape:
        raise UsageError(f"dimension mismatch: operator {H.shape[0]} vs metric {m.dim}")
    scale = linop.max_norm(m.eta) * linop.max_norm(H)
    if scale == 0.0:
        return 0.0
    return linop.max_norm(m.eta @ H - linop.adjoint(H) @ m.eta) / scale
