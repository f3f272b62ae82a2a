"""Dense complex operator algebra.

Operators are plain ``numpy`` arrays of shape ``(dim, dim)`` and dtype
``complex128``; :func:`as_operator` is the single validation point. All
functions are pure and never modify their inputs.

Residuals and tolerances throughout the package use the max-entry norm
(:func:`max_norm`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import CapacityError, DefinitenessError, NumericError, UsageError

#: Largest dimension any constructed operator may have.
MAX_DIM = 2**16


def as_operator(a, name="operator") -> np.ndarray:
    """Validate ``a`` as a square finite matrix and return it as complex128."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise UsageError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name} has non-finite entries")
    return arr


def max_norm(a) -> float:
    """Largest absolute entry."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def adjoint(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _same_dim(a, b):
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    """Tensor product with the left factor as the slow index."""
    a = as_operator(a, "A")
    b = as_operator(b, "B")
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise CapacityError(f"kron dimension {dim} exceeds the limit {max_dim}", dim=dim)
    return np.kron(a, b)


def commutator(a, b) -> np.ndarray:
    a = as_operator(a, "A")
    b = as_operator(b, "B")
    _same_dim(a, b)
    return a @ b - b @ a


def hermiticity_residual(a) -> float:
    """``max|A - A^dagger|`` relative to ``max|A|`` (0 for the zero matrix)."""
    scale = max_norm(a)
    if scale == 0.0:
        return 0.0
    return max_norm(a - adjoint(a)) / scale


def expm(a) -> np.ndarray:
    """Matrix exponential (Pade scaling-and-squaring)."""
    a = as_operator(a)
    try:
        out = sla.expm(a)
    except (sla.LinAlgError, ValueError) as exc:  # pragma: no cover - LAPACK failure
        raise NumericError(f"expm failed: {exc}") from exc
    if not np.all(np.isfinite(out)):
        raise NumericError(f"expm overflowed (input norm {max_norm(a):.3g})")
    return out


def sqrtm_pd(a, rtol: float = 1e-12) -> np.ndarray:
    """Unique positive-definite square root of a hermitian PD matrix.

    Raises :class:`DefinitenessError` if ``a`` is not hermitian to ``1e-12``
    relative, or if its smallest eigenvalue is not above ``rtol`` times the
    largest.
    """
    a = as_operator(a)
    if hermiticity_residual(a) > 1e-12:
        raise DefinitenessError("sqrtm_pd: input is not hermitian")
    w, v = np.linalg.eigh(0.5 * (a + adjoint(a)))
    if w[0] <= rtol * abs(w[-1]):
        raise DefinitenessError(
            f"sqrtm_pd: min eigenvalue {w[0]:.3e} not above {rtol:g} * max eigenvalue {w[-1]:.3e}"
        )
    root = (v * np.sqrt(w)) @ adjoint(v)
    return 0.5 * (root + adjoint(root))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an operator, with algebraic multiplicity.

    ``residuals`` holds ``max|(A - lambda I) v|`` per eigenpair when the
    eigenvectors were computed, otherwise it is ``None``.
    """

    values: np.ndarray
    residuals: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.complex128).ravel())

    def __len__(self):
        return self.values.size

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.values.imag))) if self.values.size else 0.0

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def sorted(self) -> Spectrum:
        order = np.lexsort((self.values.imag, self.values.real))
        res = None if self.residuals is None else self.residuals[order]
        return Spectrum(self.values[order], res)


def _as_spectrum(s) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum(np.asarray(s))


def eig_hermitian(a):
    """Eigen-decomposition of a hermitian matrix.

    Returns
    -------
    spectrum : Spectrum
        Real eigenvalues in ascending order.
    vectors : ndarray
        Unitary matrix whose columns are the eigenvectors.
    """
    a = as_operator(a)
    if hermiticity_residual(a) > 1e-12:
        raise UsageError(
            f"eig_hermitian: input not hermitian (relative residual {hermiticity_residual(a):.2e})"
        )
    w, v = np.linalg.eigh(a)
    return Spectrum(w.astype(np.complex128)), v


def eig_general(a, vectors: bool = False):
    """All eigenvalues of a general complex matrix.

    With ``vectors=True`` returns ``(spectrum, V)`` where column ``k`` of
    ``V`` is the right eigenvector for ``spectrum.values[k]``; the spectrum
    then carries the per-pair residuals ``max|(A - lambda I) v|`` for unit
    ``v``.
    """
    a = as_operator(a)
    try:
        if vectors:
            w, v = sla.eig(a, check_finite=False)
        else:
            w = sla.eigvals(a, check_finite=False)
    except sla.LinAlgError as exc:
        raise NumericError(f"eig_general did not converge (dim {a.shape[0]}): {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise NumericError("eig_general produced non-finite eigenvalues")
    if not vectors:
        return Spectrum(w)
    v = v / np.linalg.norm(v, axis=0)
    res = np.max(np.abs(a @ v - v * w), axis=0)
    return Spectrum(w, res), v


def match_spectra(s1, s2, tol: float):
    """Pair two spectra after sorting each by ``(Re, Im)``.

    Returns ``(matched, worst)``: ``worst`` is the largest pair distance and
    ``matched`` is ``worst <= tol``.
    """
    a = _as_spectrum(s1).sorted().values
    b = _as_spectrum(s2).sorted().values
    if a.size != b.size:
        raise UsageError(f"spectra have different cardinalities: {a.size} vs {b.size}")
    worst = float(np.max(np.abs(a - b))) if a.size else 0.0
    return worst <= tol, worst
