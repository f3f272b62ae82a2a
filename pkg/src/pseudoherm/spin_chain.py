"""Spin-1/2 chains built from undeformed and deformed spin operators.

Conventions
-----------
* ``S = sigma / 2``; up is the first basis vector and ``S^z up = +1/2 up``.
* Site 1 is the leftmost tensor factor; site indices are 1-based.
* Open boundaries: bond sums run over ``i = 1 .. N-1``; single-site field
  terms run over all ``N`` sites.
* In-plane exchange is normalised so that the hermitian partner carries
  ``Gamma (S^x S^x + S^y S^y) = Gamma/2 (S^+ S^- + S^- S^+)``. The deformed
  chains use the same ``Gamma/2`` in front of their ``S^+ S^-`` hopping, which
  is what makes ``rho H rho^{-1}`` reproduce the partner exactly.

The deformed operators are ``T_i = rho^{-1} S_i rho`` for the spin metric
``eta = prod exp(-2 w_i S^z_i)``, so ``T^+_i = e^{w_i} S^+_i`` and
``T^-_i = e^{-w_i} S^-_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from . import linop
from .errors import CapacityError, UsageError
from .metric import Metric, build_spin_metric, site_sz_diagonal

MAX_SITES = 12
MAX_SITES_HS = 10
MAX_SITES_JW = 14

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128) / 2
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128) / 2
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128) / 2
SP = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SM = np.array([[0, 0], [1, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)

_LOCAL = {"x": SX, "y": SY, "z": SZ, "+": SP, "-": SM}


def _vec(value, n, name):
    if value is None:
        return np.zeros(n)
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    arr = arr.ravel()
    if arr.size != n:
        raise UsageError(f"{name} has length {arr.size}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name} has non-finite entries")
    return arr


def _check_sites(n, lo=2, hi=MAX_SITES):
    if not isinstance(n, (int, np.integer)) or n < lo:
        raise UsageError(f"N must be an integer >= {lo}, got {n!r}")
    if n > hi:
        raise CapacityError(f"N={n} exceeds the dense limit of {hi} sites", dim=2**n)


@dataclass
class ChainParams:
    """Parameters of the XXZ-type chains.

    ``gamma`` (the metric exponents) defaults to ``w``. A metric that differs
    from ``w`` is only accepted with ``tie_metric=False``.
    ``offset`` is a constant to subtract from the hermitian partner before
    comparing it with a named integrable model (used by the ``su_q2`` preset).
    """

    N: int
    Gamma: float = 1.0
    Delta: float = 0.0
    A: np.ndarray = None
    B: np.ndarray = None
    C: np.ndarray = None
    w: np.ndarray = None
    gamma: np.ndarray = None
    tie_metric: bool = True
    offset: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        _check_sites(self.N)
        self.Gamma = float(self.Gamma)
        self.Delta = float(self.Delta)
        if not (math.isfinite(self.Gamma) and math.isfinite(self.Delta)):
            raise UsageError("Gamma and Delta must be finite")
        for name in ("A", "B", "C", "w"):
            setattr(self, name, _vec(getattr(self, name), self.N, name))
        if self.gamma is None:
            self.gamma = self.w.copy()
        else:
            self.gamma = _vec(self.gamma, self.N, "gamma")
            if self.tie_metric and not np.array_equal(self.gamma, self.w):
                raise UsageError("gamma differs from w; pass tie_metric=False to decouple them")

    def metric(self) -> Metric:
        return build_spin_metric(self.N, self.gamma)


@dataclass
class TildeParams:
    """Parameters of the general PT-symmetric chain.

    Bond couplings ``gamma_b``/``delta_b`` have length ``N-1``; the complex
    site fields ``alphaR + i alphaI`` (x), ``betaR + i betaI`` (y) and the real
    ``C`` (z) have length ``N``.
    """

    N: int
    Gamma: float = 1.0
    Delta: float = 0.0
    gamma_b: np.ndarray = None
    delta_b: np.ndarray = None
    alphaR: np.ndarray = None
    alphaI: np.ndarray = None
    betaR: np.ndarray = None
    betaI: np.ndarray = None
    C: np.ndarray = None
    theta: float = 0.0

    def __post_init__(self):
        _check_sites(self.N)
        self.Gamma = float(self.Gamma)
        self.Delta = float(self.Delta)
        self.theta = float(self.theta)
        for name in ("gamma_b", "delta_b"):
            value = getattr(self, name)
            setattr(self, name, np.ones(self.N - 1) if value is None else _vec(value, self.N - 1, name))
        for name in ("alphaR", "alphaI", "betaR", "betaI", "C"):
            setattr(self, name, _vec(getattr(self, name), self.N, name))


# ---------------------------------------------------------------- operators


def _embed(n_sites, factors):
    """Sparse kron of 2x2 ``factors`` ({site: matrix}) padded with identities."""
    out = sp.identity(1, dtype=np.complex128, format="csr")
    for site in range(1, n_sites + 1):
        out = sp.kron(out, sp.csr_matrix(factors.get(site, I2)), format="csr")
    return out


def _local(axis):
    try:
        return _LOCAL[axis]
    except KeyError:
        raise UsageError(f"axis must be one of x, y, z, +, -; got {axis!r}") from None


def deformed_local(w: float, axis: str) -> np.ndarray:
    """Single-site ``T^axis`` for deformation ``w`` as a 2x2 matrix."""
    ch, sh = math.cosh(w), math.sinh(w)
    if axis == "x":
        return ch * SX + 1j * sh * SY
    if axis == "y":
        return -1j * sh * SX + ch * SY
    if axis == "z":
        return SZ.copy()
    if axis == "+":
        return math.exp(w) * SP
    if axis == "-":
        return math.exp(-w) * SM
    return _local(axis)


def _check_site_index(n_sites, i):
    if not 1 <= i <= n_sites:
        raise UsageError(f"site index {i} out of range 1..{n_sites}")


def site_operator(n_sites: int, i: int, axis: str) -> np.ndarray:
    """``S_i^axis`` on the ``2^N`` dimensional chain."""
    _check_sites(n_sites, lo=1, hi=16)
    _check_site_index(n_sites, i)
    return _embed(n_sites, {i: _local(axis)}).toarray()


def deformed_spin(n_sites: int, i: int, w_i: float, axis: str) -> np.ndarray:
    """``T_i^axis``; eta-hermitian (for x, y, z) under the spin metric with ``gamma_i = w_i``."""
    _check_sites(n_sites, lo=1, hi=16)
    _check_site_index(n_sites, i)
    _local(axis)
    return _embed(n_sites, {i: deformed_local(float(w_i), axis)}).toarray()


# ----------------------------------------------------------------- builders


def _field_terms(n, fx, fy, fz):
    out = sp.csr_matrix((2**n, 2**n), dtype=np.complex128)
    for i in range(1, n + 1):
        local = fx[i - 1] * SX + fy[i - 1] * SY + fz[i - 1] * SZ
        if np.any(local):
            out = out + _embed(n, {i: local})
    return out


def build_hermitian_xxz(p: ChainParams) -> np.ndarray:
    """Dirac-hermitian partner: XXZ exchange plus real fields ``A S^x + B S^y + C S^z``."""
    n = p.N
    h = _field_terms(n, p.A, p.B, p.C)
    for i in range(1, n):
        h = h + p.Gamma * (_embed(n, {i: SX, i + 1: SX}) + _embed(n, {i: SY, i + 1: SY}))
        h = h + p.Delta * _embed(n, {i: SZ, i + 1: SZ})
    h = h.toarray()
    return 0.5 * (h + linop.adjoint(h))


def build_asymmetric_xxz(p: ChainParams) -> np.ndarray:
    """Asymmetric chain with hopping ``Gamma/2 e^{+-(w_i - w_{i+1})}`` and complex fields.

    Field coefficients are ``A cosh w - i B sinh w`` on ``S^x`` and
    ``B cosh w + i A sinh w`` on ``S^y``.
    """
    n = p.N
    w = p.w
    ch, sh = np.cosh(w), np.sinh(w)
    H = _field_terms(n, p.A * ch - 1j * p.B * sh, p.B * ch + 1j * p.A * sh, p.C)
    for i in range(1, n):
        bias = math.exp(w[i - 1] - w[i])
        H = H + 0.5 * p.Gamma * (bias * _embed(n, {i: SP, i + 1: SM}) + _embed(n, {i: SM, i + 1: SP}) / bias)
        H = H + p.Delta * _embed(n, {i: SZ, i + 1: SZ})
    return H.toarray()


def asymmetric_xxz_from_deformed_spins(p: ChainParams) -> np.ndarray:
    """Same chain written as a polynomial in the ``T`` operators (consistency route)."""
    n = p.N
    T = {(i, a): deformed_local(p.w[i - 1], a) for i in range(1, n + 1) for a in "xyz+-"}
    H = sp.csr_matrix((2**n, 2**n), dtype=np.complex128)
    for i in range(1, n):
        H = H + 0.5 * p.Gamma * (
            _embed(n, {i: T[i, "+"], i + 1: T[i + 1, "-"]}) + _embed(n, {i: T[i, "-"], i + 1: T[i + 1, "+"]})
        )
        H = H + p.Delta * _embed(n, {i: T[i, "z"], i + 1: T[i + 1, "z"]})
    for i in range(1, n + 1):
        local = p.A[i - 1] * T[i, "x"] + p.B[i - 1] * T[i, "y"] + p.C[i - 1] * T[i, "z"]
        H = H + _embed(n, {i: local})
    return H.toarray()


def build_symmetric_xxz(p: ChainParams) -> np.ndarray:
    """Uniform-deformation chain: undeformed exchange, complex fields with a single ``w``."""
    if not np.all(p.w == p.w[0]):
        raise UsageError("symmetric chain needs a uniform deformation (all w_i equal)")
    return build_asymmetric_xxz(p)


def build_general_pt(tp: TildeParams) -> np.ndarray:
    """General PT-symmetric chain with independent bond biases and complex fields."""
    n = tp.N
    H = _field_terms(n, tp.alphaR + 1j * tp.alphaI, tp.betaR + 1j * tp.betaI, tp.C)
    for i in range(1, n):
        H = H + 0.5 * tp.Gamma * (
            tp.gamma_b[i - 1] * _embed(n, {i: SP, i + 1: SM}) + tp.delta_b[i - 1] * _embed(n, {i: SM, i + 1: SP})
        )
        H = H + tp.Delta * _embed(n, {i: SZ, i + 1: SZ})
    return H.toarray()


def tilde_from_chain(p: ChainParams, theta: float = 0.0) -> TildeParams:
    """General-chain parameters that reproduce :func:`build_asymmetric_xxz` for ``p``."""
    ch, sh = np.cosh(p.w), np.sinh(p.w)
    dw = p.w[:-1] - p.w[1:]
    return TildeParams(
        N=p.N,
        Gamma=p.Gamma,
        Delta=p.Delta,
        gamma_b=np.exp(dw),
        delta_b=np.exp(-dw),
        alphaR=p.A * ch,
        alphaI=-p.B * sh,
        betaR=p.B * ch,
        betaI=p.A * sh,
        C=p.C,
        theta=theta,
    )


def build_haldane_shastry(n_sites: int, sign: int = 1, deformed: bool = False, w=None) -> np.ndarray:
    """``sign * sum_{i<j} V_i . V_j / (2 sin^2(pi (i-j) / N))`` with ``V = S`` or ``T(w)``."""
    _check_sites(n_sites, lo=3, hi=MAX_SITES_HS)
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    w = _vec(w, n_sites, "w")
    if not deformed:
        w = np.zeros(n_sites)
    n = n_sites
    H = sp.csr_matrix((2**n, 2**n), dtype=np.complex128)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            J = hs_coupling(n, i, j)
            for a in "xyz":
                H = H + J * _embed(n, {i: deformed_local(w[i - 1], a), j: deformed_local(w[j - 1], a)})
    return sign * H.toarray()


def hs_coupling(n_sites: int, i: int, j: int) -> float:
    return 1.0 / (2.0 * math.sin(math.pi * (i - j) / n_sites) ** 2)


# ----------------------------------------------------------------- symmetry


def pt_operator_phase(n_sites: int, theta: float) -> np.ndarray:
    """Diagonal of ``V = prod_i exp(-i theta S^z_i)``.

    Combined with complex conjugation in the computational basis,
    ``A -> V conj(A) V^dagger`` sends ``S^x -> S^x cos(theta) + S^y sin(theta)``,
    ``S^y -> S^x sin(theta) - S^y cos(theta)``, ``S^z -> S^z`` and ``i -> -i``.
    """
    return np.exp(-1j * theta * site_sz_diagonal(n_sites).sum(axis=1))


def pt_transform(H, theta: float) -> np.ndarray:
    H = linop.as_operator(H, "H")
    n_sites = int(round(math.log2(H.shape[0])))
    if 2**n_sites != H.shape[0]:
        raise UsageError(f"operator dimension {H.shape[0]} is not a power of two")
    v = pt_operator_phase(n_sites, theta)
    return v[:, None] * np.conj(H) * np.conj(v)[None, :]


def pt_residual(H, theta: float) -> float:
    """``max|PT(H) - H| / max|H|`` for the spin-space reflection at angle ``theta``."""
    H = linop.as_operator(H, "H")
    scale = linop.max_norm(H)
    if scale == 0.0:
        return 0.0
    return linop.max_norm(pt_transform(H, theta) - H) / scale


def pt_condition(A, B, theta: float, tol: float = 1e-10) -> bool:
    """Field condition ``B_i / A_i = tan(theta/2)`` for every site.

    Sites with ``A_i = 0`` satisfy it only when ``B_i cos(theta/2)`` vanishes.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    half = 0.5 * theta
    for a, b in zip(A.ravel(), B.ravel()):
        if a != 0.0:
            if abs(b / a - math.tan(half)) > tol:
                return False
        elif abs(b * math.cos(half)) > tol:
            return False
    return True


def pt_condition_general_printed(alphaR, alphaI, betaR, betaI, theta: float, tol: float = 1e-10) -> bool:
    """General-chain field condition exactly as printed:
    ``betaR/alphaR = -alphaR/betaI = tan(theta/2)``.

    ``alphaI`` is accepted for signature parity but unused by this form;
    :func:`pt_condition_general` is the variant consistent with the matrix
    check.
    """
    t = math.tan(0.5 * theta)
    aR, bR, bI = (np.asarray(x, dtype=float).ravel() for x in (alphaR, betaR, betaI))
    with np.errstate(divide="ignore", invalid="ignore"):
        first = bR / aR
        second = -aR / bI
    return bool(np.all(np.abs(first - t) <= tol) and np.all(np.abs(second - t) <= tol))


def pt_condition_general(alphaR, alphaI, betaR, betaI, theta: float, tol: float = 1e-10) -> bool:
    """Field condition ``betaR/alphaR = -alphaI/betaI = tan(theta/2)``, cross-multiplied.

    Written as ``betaR cos - alphaR sin = 0`` and ``alphaI cos + betaI sin = 0``
    (half-angle), which also covers vanishing denominators.
    """
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    aR, aI, bR, bI = (np.asarray(x, dtype=float).ravel() for x in (alphaR, alphaI, betaR, betaI))
    return bool(np.all(np.abs(bR * c - aR * s) <= tol) and np.all(np.abs(aI * c + bI * s) <= tol))


# ------------------------------------------------------------------ presets

PRESETS = {
    "asymmetric_phase": "w_k = w - (k-1) phi: uniform hopping bias e^{+-phi} (asymmetric XXZ)",
    "transverse_ising": "Gamma = B_i = C_i = 0, A_i = A: transverse-field Ising partner",
    "xx_field": "Delta = A_i = B_i = 0: XX chain in a transverse field (free fermions)",
    "su_q2": "Gamma = 1, Delta = cosh q, C_1 = -C_N = -sinh q: SU_q(2)-invariant partner (h - Delta)",
}


def preset(name: str, **args) -> ChainParams:
    """Named parameter sets for integrable limits.

    All presets tie the metric to the deformation (``gamma = w``).

    ``asymmetric_phase(N, w=0, phi=0, Gamma=1, Delta=0, A, B, C)``
    ``transverse_ising(N, A=1, Delta=1, w)``
    ``xx_field(N, Gamma=1, C, w)``
    ``su_q2(N, q, w)``
    """
    args = dict(args)
    try:
        n = int(args.pop("N"))
    except KeyError:
        raise UsageError("preset needs N") from None
    if name == "asymmetric_phase":
        w0 = float(args.pop("w", 0.0))
        phi = float(args.pop("phi", 0.0))
        w = w0 - np.arange(n) * phi
        kw = {k: args.pop(k) for k in ("Gamma", "Delta", "A", "B", "C") if k in args}
        kw.setdefault("Gamma", 1.0)
        out = ChainParams(N=n, w=w, label=name, **kw)
    elif name == "transverse_ising":
        A = float(args.pop("A", 1.0))
        out = ChainParams(
            N=n, Gamma=0.0, Delta=float(args.pop("Delta", 1.0)), A=A, B=0.0, C=0.0, w=args.pop("w", None), label=name
        )
    elif name == "xx_field":
        out = ChainParams(
            N=n, Gamma=float(args.pop("Gamma", 1.0)), Delta=0.0, C=args.pop("C", None), w=args.pop("w", None), label=name
        )
    elif name == "su_q2":
        q = float(args.pop("q", 0.0))
        C = np.zeros(n)
        C[0], C[-1] = -math.sinh(q), math.sinh(q)
        out = ChainParams(N=n, Gamma=1.0, Delta=math.cosh(q), C=C, w=args.pop("w", None), label=name)
        out.offset = out.Delta
    else:
        raise UsageError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    if args:
        raise UsageError(f"preset {name!r} got unexpected arguments {sorted(args)}")
    return out


def bond_factors(p: ChainParams) -> np.ndarray:
    """Hopping biases ``e^{w_i - w_{i+1}}`` for each bond."""
    return np.exp(p.w[:-1] - p.w[1:])


def random_chain_params(n_sites: int, rng: np.random.Generator, scale: float = 1.0) -> ChainParams:
    """All of Gamma, Delta, A, B, C, w uniform in ``[-scale, scale]``; ``gamma = w``."""
    u = lambda size=None: rng.uniform(-scale, scale, size)  # noqa: E731
    return ChainParams(
        N=n_sites, Gamma=u(), Delta=u(), A=u(n_sites), B=u(n_sites), C=u(n_sites), w=u(n_sites), label="random"
    )


def with_params(p: ChainParams, **changes) -> ChainParams:
    """Copy of ``p`` with fields replaced (re-validated)."""
    return replace(p, **changes)


# ------------------------------------------------------------------- oracle


def jw_xx_oracle(n_sites: int, Gamma: float, C) -> linop.Spectrum:
    """Many-body spectrum of ``Gamma sum (SxSx + SySy) + sum C_i S^z_i`` by free fermions.

    With ``S^z = n - 1/2`` the chain maps onto spinless fermions with hopping
    ``Gamma/2`` and on-site energy ``C_i``; energies are all subset sums of
    the single-particle levels minus ``sum C_i / 2``.
    """
    if n_sites < 1:
        raise UsageError("n_sites must be >= 1")
    if n_sites > MAX_SITES_JW:
        raise CapacityError(f"subset enumeration limited to N <= {MAX_SITES_JW}", dim=2**n_sites)
    C = _vec(C, n_sites, "C")
    single = np.diag(C) + np.diag(np.full(n_sites - 1, 0.5 * Gamma), 1) + np.diag(np.full(n_sites - 1, 0.5 * Gamma), -1)
    eps = np.linalg.eigvalsh(single)
    energies = np.zeros(1)
    for e in eps:
        energies = np.concatenate([energies, energies + e])
    return linop.Spectrum(np.sort(energies - 0.5 * C.sum()))


def multiplet_structure(values, tol: float = 1e-8) -> list[int]:
    """Sizes of clusters of (real parts of) sorted eigenvalues closer than ``tol``."""
    vals = np.sort(np.real(np.asarray(values)))
    if vals.size == 0:
        return []
    sizes = [1]
    for a, b in zip(vals[:-1], vals[1:]):
        if b - a <= tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return sizes
