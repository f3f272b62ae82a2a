"""Deformed rational Calogero model: Fock-space algebra and real-space grid.

Two representations are used.

Fock basis
    Two oscillator modes, truncated by total number ``n1 + n2 < d``. The
    rotation generator ``L12 = x1 p2 - x2 p1`` conserves ``n1 + n2``, so in
    this basis it is represented exactly (integer spectrum) and
    ``exp(-gamma L12)`` is exact block by block. Operator identities are
    checked on interior number blocks, away from the truncation edge.

Grid (N = 2)
    Second-order finite differences on a square box in centre-of-mass /
    relative coordinates ``u = (x1 + x2)/sqrt2``, ``v = (x1 - x2)/sqrt2``. The
    ``u`` axis has ``n`` interior points (``n`` odd, origin included), the
    ``v`` axis ``n + 1`` points at half-integer multiples of the spacing, so
    no grid point lies on ``x1 = x2``. The particle swap is ``v -> -v`` and
    maps the grid onto itself.

Units: ``hbar = m = omega = 1``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import linop
from .errors import CapacityError, NumericError, SingularityError, UsageError
from .metric import Metric, build_rotation_metric

# ------------------------------------------------------------------ Fock basis


@dataclass(frozen=True)
class FockRep:
    d: int
    n1: np.ndarray
    n2: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    L12: np.ndarray

    @property
    def dim(self) -> int:
        return self.n1.size

    @property
    def total_number(self) -> np.ndarray:
        return self.n1 + self.n2

    def interior(self, max_total: int) -> np.ndarray:
        """Boolean mask of basis states with ``n1 + n2 <= max_total``."""
        return self.total_number <= max_total

    def index(self, n1: int, n2: int) -> int:
        hit = np.flatnonzero((self.n1 == n1) & (self.n2 == n2))
        if hit.size == 0:
            raise UsageError(f"|{n1},{n2}> is outside the truncated basis")
        return int(hit[0])


def build_fock_rep(d: int) -> FockRep:
    """Two-mode oscillator operators on the basis ``{|n1, n2> : n1 + n2 < d}``.

    Basis states are ordered by total number, then by ``n1``.
    """
    if d < 8:
        raise UsageError(f"truncation d must be >= 8, got {d}")
    dim = d * (d + 1) // 2
    if dim > 4096:
        raise CapacityError(f"Fock basis of dimension {dim} exceeds 4096", dim=dim)
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(np.complex128)
    ad = a.T.copy()
    one = np.eye(d, dtype=np.complex128)
    x = (a + ad) / math.sqrt(2)
    p = 1j * (ad - a) / math.sqrt(2)

    pairs = [(k - n, n) for k in range(d) for n in range(k, -1, -1)]
    n1 = np.array([q[0] for q in pairs])
    n2 = np.array([q[1] for q in pairs])
    keep = n1 * d + n2

    def restrict(op):
        return op[np.ix_(keep, keep)].copy()

    x1, x2 = restrict(np.kron(x, one)), restrict(np.kron(one, x))
    p1, p2 = restrict(np.kron(p, one)), restrict(np.kron(one, p))
    # i (a1 a2^dag - a1^dag a2): number conserving, so exact on the triangle
    L12 = restrict(1j * (np.kron(a, ad) - np.kron(ad, a)))
    return FockRep(d, n1, n2, x1, x2, p1, p2, L12)


def deformed_pairs(rep: FockRep, phi: float):
    """``(X1, X2, P1, P2)``: complex rotation of ``(x1, x2)`` and ``(p1, p2)`` by ``phi``."""
    ch, sh = math.cosh(phi), math.sinh(phi)
    X1 = ch * rep.x1 + 1j * sh * rep.x2
    X2 = -1j * sh * rep.x1 + ch * rep.x2
    P1 = ch * rep.p1 + 1j * sh * rep.p2
    P2 = -1j * sh * rep.p1 + ch * rep.p2
    return X1, X2, P1, P2


def rotation_metric(rep: FockRep, gamma: float) -> Metric:
    return build_rotation_metric(gamma, rep.L12)


def interior_commutator_deviation(rep: FockRep, phi: float = 0.0, margin: int = 3) -> float:
    """Largest ``|[X_i, P_j] - i delta_ij|`` over states with ``n1 + n2 <= d - margin``."""
    X1, X2, P1, P2 = deformed_pairs(rep, phi)
    mask = rep.interior(rep.d - margin)
    eye = np.eye(int(mask.sum()))
    worst = 0.0
    for i, X in enumerate((X1, X2)):
        for j, P in enumerate((P1, P2)):
            c = (X @ P - P @ X)[np.ix_(mask, mask)]
            worst = max(worst, linop.max_norm(c - 1j * (i == j) * eye))
    return worst


def conjugation_check(rep: FockRep, gamma: float, operator: str = "all", margin: int = 6) -> float:
    """Deviation of ``rho^{-1} o rho`` (``rho = exp(-gamma L12)``) from the deformed ``O``.

    ``operator`` is one of ``x1, x2, p1, p2`` or ``all``; the deformed
    operators use ``phi = gamma``. The maximum is taken over rows and
    columns with ``n1 + n2 <= d - margin``.
    """
    if abs(gamma) > 1.5:
        raise NumericError(f"|gamma| = {abs(gamma)} > 1.5: exp(gamma L12) too ill-conditioned at d = {rep.d}")
    m = rotation_metric(rep, gamma)
    plain = {"x1": rep.x1, "x2": rep.x2, "p1": rep.p1, "p2": rep.p2}
    deformed = dict(zip(("x1", "x2", "p1", "p2"), deformed_pairs(rep, gamma)))
    names = list(plain) if operator == "all" else [operator]
    if any(n not in plain for n in names):
        raise UsageError(f"unknown operator {operator!r}")
    mask = rep.interior(rep.d - margin)
    worst = 0.0
    for name in names:
        diff = m.rho_inv @ plain[name] @ m.rho - deformed[name]
        worst = max(worst, linop.max_norm(diff[np.ix_(mask, mask)]))
    return worst


def l12_identity_deviation(rep: FockRep, phi: float, margin: int = 3) -> float:
    """Interior deviation of ``X1 P2 - X2 P1`` from ``L12`` (the deformation preserves it)."""
    X1, X2, P1, P2 = deformed_pairs(rep, phi)
    mask = rep.interior(rep.d - margin)
    diff = X1 @ P2 - X2 @ P1 - rep.L12
    return linop.max_norm(diff[np.ix_(mask, mask)])


def integer_spectrum_deviation(rep: FockRep) -> float:
    """Largest distance of an ``L12`` eigenvalue from the nearest integer."""
    m = np.linalg.eigvalsh(rep.L12)
    return float(np.max(np.abs(m - np.round(m))))


# ------------------------------------------------------------ N >= 2 coords


def deformed_coordinates(x, phi: float) -> np.ndarray:
    """Pairwise ``X_ij`` for particle positions ``x`` (length ``N >= 2``).

    Rows/columns are particles; ``X_ji = -X_ij`` and the diagonal is zero.
    Particles 1 and 2 are mixed by the complex rotation, the rest are not.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] < 2:
        raise UsageError("need at least two particles")
    ch, sh = math.cosh(phi), math.sinh(phi)
    y = x.copy()
    y[0] = ch * x[0] + 1j * sh * x[1]
    y[1] = -1j * sh * x[0] + ch * x[1]
    return y[:, None] - y[None, :]


def calogero_potential(x, lam: float, phi: float = 0.0):
    """``lambda(lambda-1)/2 sum_{i != j} X_ij^{-2} + sum x_i^2 / 2``."""
    x = np.asarray(x)
    X = deformed_coordinates(x, phi)
    off = ~np.eye(x.shape[0], dtype=bool)
    off = off.reshape(off.shape + (1,) * (X.ndim - 2))
    inv = np.where(off, 1.0 / np.where(off, X, 1.0) ** 2, 0.0)
    return 0.5 * lam * (lam - 1) * inv.sum(axis=(0, 1)) + 0.5 * np.sum(np.asarray(x, dtype=float) ** 2, axis=0)


# --------------------------------------------------------------------- grid


@dataclass(frozen=True)
class GridSpec:
    L: float = 6.0
    n: int = 61
    lam: float = 2.0
    phi: float = 0.1

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 3 or self.n % 2 == 0:
            raise UsageError(f"n must be an odd integer >= 3, got {self.n!r}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise UsageError("L must be positive")
        if not self.lam > 0.5:
            raise UsageError(f"lambda must exceed 1/2, got {self.lam}")
        if not math.isfinite(self.phi):
            raise UsageError("phi must be finite")
        if self.dim > 4096:
            raise CapacityError(f"grid dimension {self.dim} exceeds 4096", dim=self.dim)

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / (self.n + 1)

    @property
    def shape(self):
        return self.n, self.n + 1

    @property
    def dim(self) -> int:
        return self.n * (self.n + 1)


def grid_axes(g: GridSpec):
    """``(u, v)``: centre-of-mass and relative axes."""
    h = g.spacing
    u = -g.L + h * np.arange(1, g.n + 1)
    v = (np.arange(g.n + 1) - 0.5 * g.n) * h
    return u, v


def grid_coordinates(g: GridSpec):
    """Flattened particle coordinates ``(x1, x2)`` at every grid point (``u`` slow)."""
    u, v = grid_axes(g)
    U, V = np.meshgrid(u, v, indexing="ij")
    s = math.sqrt(2.0)
    return ((U + V) / s).ravel(), ((U - V) / s).ravel()


def swap_permutation(g: GridSpec) -> np.ndarray:
    """Index map of the particle exchange ``x1 <-> x2`` (``v -> -v``)."""
    nu, nv = g.shape
    idx = np.arange(nu * nv).reshape(nu, nv)
    return idx[:, ::-1].ravel()


def _second_difference(m, h):
    return (np.diag(np.full(m, -2.0)) + np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)) / h**2


def grid_kinetic(g: GridSpec) -> np.ndarray:
    nu, nv = g.shape
    h = g.spacing
    lap = np.kron(_second_difference(nu, h), np.eye(nv)) + np.kron(np.eye(nu), _second_difference(nv, h))
    return -0.5 * lap


def grid_potentials(g: GridSpec):
    """Pointwise complex (deformed) and real (undeformed) potentials."""
    x1, x2 = grid_coordinates(g)
    X12 = (x1 - x2) * math.cosh(g.phi) + 1j * (x1 + x2) * math.sinh(g.phi)
    x12 = x1 - x2
    if np.min(np.abs(X12)) < 1e-9 or np.min(np.abs(x12)) < 1e-9:
        raise SingularityError("grid point on the singular locus of the pair potential; offset the grid")
    trap = 0.5 * (x1**2 + x2**2)
    c = g.lam * (g.lam - 1.0)
    return c / X12**2 + trap, c / x12**2 + trap


def build_grid_hamiltonians(g: GridSpec):
    """Dense ``(H, h)`` on the grid: deformed (complex) and standard (real symmetric)."""
    kin = grid_kinetic(g)
    V, v = grid_potentials(g)
    h = kin.copy()
    h[np.diag_indices_from(h)] += v
    H = kin.astype(np.complex128)
    del kin
    H[np.diag_indices_from(H)] += V
    return H, h


def pt_residual_calogero(H, g: GridSpec) -> float:
    """``max|conj(P H P) - H| / max|H|`` with ``P`` the grid particle exchange."""
    H = np.asarray(H)
    if H.shape != (g.dim, g.dim):
        raise UsageError(f"operator of dimension {H.shape[0]} is not on this grid ({g.dim})")
    perm = swap_permutation(g)
    scale = linop.max_norm(H)
    if scale == 0.0:
        return 0.0
    return linop.max_norm(np.conj(H[np.ix_(perm, perm)]) - H) / scale


def exchange_sector(op, g: GridSpec, parity: int) -> np.ndarray:
    """Restriction of a swap-symmetric operator to exchange parity ``+1`` or ``-1``."""
    if parity not in (1, -1):
        raise UsageError("parity must be +1 or -1")
    nu, nv = g.shape
    grid = np.arange(nu * nv).reshape(nu, nv)
    a = grid[:, : nv // 2].ravel()
    b = grid[:, ::-1][:, : nv // 2].ravel()
    return 0.5 * (op[np.ix_(a, a)] + parity * op[np.ix_(a, b)] + parity * op[np.ix_(b, a)] + op[np.ix_(b, b)])


@functools.lru_cache(maxsize=4)
def grid_spectra(g: GridSpec):
    """Eigenvalues of the grid ``H`` (ascending real part), of ``h`` and of its odd sector.

    Cached: the dense non-hermitian solve dominates (tens of seconds at n = 61).
    """
    H, h = build_grid_hamiltonians(g)
    pt = pt_residual_calogero(H, g)
    e_h = np.linalg.eigvalsh(h)
    e_odd = np.linalg.eigvalsh(exchange_sector(h, g, -1))
    del h
    try:
        e_H = sla.eigvals(H, overwrite_a=True, check_finite=False)
    except sla.LinAlgError as exc:  # pragma: no cover
        raise NumericError(f"grid eigensolve failed: {exc}") from exc
    e_H = e_H[np.lexsort((e_H.imag, e_H.real))]
    return e_H, e_h, e_odd, pt


def calogero_exact_spectrum(lam: float, levels: int) -> np.ndarray:
    """Lowest ``levels`` energies ``2n + m + lambda + 1`` of the two-particle model.

    ``m`` counts centre-of-mass quanta, ``n`` relative (isotonic) quanta.
    """
    if not lam > 0.5:
        raise UsageError(f"closed form requires lambda > 1/2, got {lam}")
    if levels < 0:
        raise UsageError("levels must be non-negative")
    energies = [2 * n + m + lam + 1 for n in range(levels) for m in range(levels) if 2 * n + m < levels]
    return np.sort(np.array(energies, dtype=float))[:levels]
