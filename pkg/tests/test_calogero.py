import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from pseudoherm import calogero as cg
from pseudoherm import linop
from pseudoherm.errors import CapacityError, NumericError, SingularityError, UsageError


def isotonic_levels(lam, count, r_max=9.0, points=6000):
    """Half-line finite differences for -u''/2 + lam(lam-1)/(2 r^2) u + r^2/2 u, u(0) = 0."""
    h = r_max / (points + 1)
    r = h * np.arange(1, points + 1)
    diag = 1.0 / h**2 + 0.5 * lam * (lam - 1) / r**2 + 0.5 * r**2
    off = np.full(points - 1, -0.5 / h**2)
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]


# ------------------------------------------------------------ exact oracle


@pytest.mark.parametrize("lam", [2.0, 1.5, 3.0])
def test_exact_spectrum_against_isotonic_finite_differences(lam):
    # relative motion is the isotonic oscillator, the centre of mass a plain oscillator
    rel = isotonic_levels(lam, 4)
    assert np.allclose(rel, 2 * np.arange(4) + lam + 0.5, rtol=2e-5)
    combined = np.sort([e + m + 0.5 for e in rel for m in range(8)])[:6]
    assert np.allclose(cg.calogero_exact_spectrum(lam, 6), combined, rtol=2e-5)


def test_exact_spectrum_frozen_values():
    assert np.array_equal(cg.calogero_exact_spectrum(2.0, 4), [3.0, 4.0, 5.0, 5.0])
    assert np.array_equal(cg.calogero_exact_spectrum(2.0, 6), [3, 4, 5, 5, 6, 6])
    assert cg.calogero_exact_spectrum(2.0, 0).size == 0
    with pytest.raises(UsageError):
        cg.calogero_exact_spectrum(0.5, 3)


# ---------------------------------------------------------- coordinates


def test_deformed_coordinates_pair_difference():
    x = np.array([0.4, -1.1, 0.7])
    phi = 0.25
    X = cg.deformed_coordinates(x, phi)
    expect = (x[0] - x[1]) * math.cosh(phi) + 1j * (x[0] + x[1]) * math.sinh(phi)
    assert np.isclose(X[0, 1], expect)
    assert np.allclose(X, -X.T)
    assert np.allclose(np.diag(X), 0)
    # particle 3 is not rotated
    assert np.isclose(X[2, 0], x[2] - (x[0] * math.cosh(phi) + 1j * x[1] * math.sinh(phi)))
    with pytest.raises(UsageError):
        cg.deformed_coordinates([1.0], phi)


def test_potential_undeformed_three_particles():
    x = np.array([0.3, -0.9, 1.4])
    lam = 2.5
    pair = sum(1 / (x[i] - x[j]) ** 2 for i in range(3) for j in range(3) if i != j)
    expect = 0.5 * lam * (lam - 1) * pair + 0.5 * np.sum(x**2)
    assert np.isclose(cg.calogero_potential(x, lam), expect)


# -------------------------------------------------------------- Fock rep


@pytest.fixture(scope="module")
def fock():
    return cg.build_fock_rep(20)


def test_fock_basis_layout():
    rep = cg.build_fock_rep(8)
    assert rep.dim == 36
    assert np.all(np.diff(rep.total_number) >= 0)
    # within a shell n1 runs downward from 0: (0, 1) precedes (1, 0)
    assert rep.index(0, 0) == 0 and rep.index(0, 1) == 1 and rep.index(1, 0) == 2
    with pytest.raises(UsageError):
        rep.index(8, 0)
    with pytest.raises(UsageError):
        cg.build_fock_rep(7)
    with pytest.raises(CapacityError):
        cg.build_fock_rep(91)


def test_l12_spectrum_is_integer_blocks():
    # block K carries m = -K, -K+2, ..., K
    rep = cg.build_fock_rep(8)
    expect = np.sort([m for K in range(8) for m in range(-K, K + 1, 2)])
    assert np.allclose(np.linalg.eigvalsh(rep.L12), expect, atol=1e-12)
    assert cg.integer_spectrum_deviation(rep) < 1e-12


def test_l12_generates_rotations(fock):
    # [L12, x1] = i x2 and [L12, x2] = -i x1 on the interior
    mask = fock.interior(fock.d - 2)
    inner = np.ix_(mask, mask)
    assert linop.max_norm((fock.L12 @ fock.x1 - fock.x1 @ fock.L12 - 1j * fock.x2)[inner]) < 1e-12
    assert linop.max_norm((fock.L12 @ fock.x2 - fock.x2 @ fock.L12 + 1j * fock.x1)[inner]) < 1e-12


def test_conjugation_derivative_by_finite_differences(fock):
    # d/dgamma rho^{-1} x1 rho at gamma = 0 equals i x2, matching the cosh/sinh form
    eps = 1e-5
    mask = fock.interior(fock.d - 6)
    plus, minus = cg.rotation_metric(fock, eps), cg.rotation_metric(fock, -eps)
    fd = (plus.rho_inv @ fock.x1 @ plus.rho - minus.rho_inv @ fock.x1 @ minus.rho) / (2 * eps)
    assert linop.max_norm((fd - 1j * fock.x2)[np.ix_(mask, mask)]) < 1e-8


@pytest.mark.parametrize("gamma", [0.0, 0.3, -0.3])
def test_conjugation_and_identities(fock, gamma):
    assert cg.conjugation_check(fock, gamma) < 1e-8
    assert cg.interior_commutator_deviation(fock, gamma) < 1e-12
    assert cg.l12_identity_deviation(fock, gamma) < 1e-12


def test_conjugation_single_operator_and_errors(fock):
    assert cg.conjugation_check(fock, 0.3, operator="p2") < 1e-8
    with pytest.raises(UsageError):
        cg.conjugation_check(fock, 0.3, operator="L")
    with pytest.raises(NumericError):
        cg.conjugation_check(fock, 1.6)


def test_rotation_metric_eigenvalues(fock):
    gamma = 0.3
    m = cg.rotation_metric(fock, gamma)
    eig = np.linalg.eigvalsh(m.eta)
    assert eig.min() > 0
    # eta = exp(-2 gamma L12) with integer L12 eigenvalues; small eigenvalues of
    # eta are only resolved to absolute precision, so compare against max|eta|
    ints = np.round(np.linalg.eigvalsh(fock.L12))
    assert cg.integer_spectrum_deviation(fock) < 1e-10
    assert set(ints.astype(int)) == set(range(-19, 20))
    expect = np.sort(np.exp(-2 * gamma * ints))
    assert np.max(np.abs(eig - expect)) / eig.max() < 1e-10


def test_deformed_coordinates_are_eta_hermitian(fock):
    m = cg.rotation_metric(fock, 0.3)
    mask = fock.interior(fock.d - 6)
    for X in cg.deformed_pairs(fock, 0.3):
        diff = (m.eta @ X - X.conj().T @ m.eta)[np.ix_(mask, mask)]
        assert linop.max_norm(diff) < 1e-9 * linop.max_norm(m.eta)


# ----------------------------------------------------------------- grid


@pytest.fixture(scope="module")
def small_grid():
    return cg.GridSpec(L=5.0, n=21, lam=2.0, phi=0.1)


def test_grid_spec_validation():
    with pytest.raises(UsageError):
        cg.GridSpec(n=20)
    with pytest.raises(UsageError):
        cg.GridSpec(lam=0.5)
    with pytest.raises(UsageError):
        cg.GridSpec(L=-1.0)
    with pytest.raises(CapacityError):
        cg.GridSpec(n=65)
    g = cg.GridSpec()
    assert g.dim == 61 * 62 and g.shape == (61, 62)


def test_grid_avoids_the_coincidence_line(small_grid):
    x1, x2 = cg.grid_coordinates(small_grid)
    assert np.min(np.abs(x1 - x2)) > 0.1 * small_grid.spacing
    u, v = cg.grid_axes(small_grid)
    assert np.isclose(u[small_grid.n // 2], 0.0)
    assert np.allclose(v, -v[::-1])


def test_swap_permutation_exchanges_particles(small_grid):
    x1, x2 = cg.grid_coordinates(small_grid)
    perm = cg.swap_permutation(small_grid)
    assert np.allclose(x1[perm], x2) and np.allclose(x2[perm], x1)
    assert np.array_equal(perm[perm], np.arange(small_grid.dim))


def test_grid_hamiltonians_structure(small_grid):
    H, h = cg.build_grid_hamiltonians(small_grid)
    assert h.dtype == np.float64 and np.array_equal(h, h.T)
    assert np.array_equal(H, H.T)
    assert linop.hermiticity_residual(H) > 0
    assert cg.pt_residual_calogero(H, small_grid) < 1e-12
    H0, h0 = cg.build_grid_hamiltonians(cg.GridSpec(L=5.0, n=21, lam=2.0, phi=0.0))
    assert np.array_equal(H0.real, h0) and not np.any(H0.imag)
    with pytest.raises(UsageError):
        cg.pt_residual_calogero(np.eye(3), small_grid)


def test_exchange_sectors_split_spectrum(small_grid):
    _, h = cg.build_grid_hamiltonians(small_grid)
    even = np.linalg.eigvalsh(cg.exchange_sector(h, small_grid, 1))
    odd = np.linalg.eigvalsh(cg.exchange_sector(h, small_grid, -1))
    assert np.allclose(np.sort(np.concatenate([even, odd])), np.linalg.eigvalsh(h), atol=1e-10)
    with pytest.raises(UsageError):
        cg.exchange_sector(h, small_grid, 0)


def test_small_grid_spectra_are_close(small_grid):
    e_H, e_h, e_odd, pt = cg.grid_spectra(small_grid)
    assert pt < 1e-12
    assert np.max(np.abs(e_H[:5].imag)) < 1e-2
    assert np.max(np.abs(e_H[:5].real - e_h[:5]) / e_h[:5]) < 5e-2
    assert np.max(np.abs(e_odd[:4] - [3, 4, 5, 5]) / [3, 4, 5, 5]) < 5e-2


@pytest.mark.slow
def test_reference_grid_odd_sector(reference_grid):
    g, (e_H, e_h, e_odd, pt) = reference_grid
    exact = cg.calogero_exact_spectrum(2.0, 4)
    assert np.max(np.abs(e_odd[:4] - exact) / exact) < 1e-2
    assert np.max(np.abs(e_H[:5].real - e_h[:5]) / e_h[:5]) < 1e-2


# ------------------------------------------------------- documented examples


def test_fock_documented_examples():
    rep8 = cg.build_fock_rep(8)
    for op in (rep8.x1, rep8.x2, rep8.p1, rep8.p2, rep8.L12):
        assert np.array_equal(op, op.conj().T)
    rep16 = cg.build_fock_rep(16)
    assert cg.interior_commutator_deviation(rep16) <= 1e-12
    vac = rep16.index(0, 0)
    assert np.isclose((rep16.x1 @ rep16.x1)[vac, vac], 0.5, atol=1e-15)


def test_deformed_pairs_documented_examples():
    rep = cg.build_fock_rep(16)
    assert all(np.array_equal(a, b) for a, b in zip(cg.deformed_pairs(rep, 0.0), (rep.x1, rep.x2, rep.p1, rep.p2)))
    assert cg.l12_identity_deviation(rep, 0.7) <= 1e-12
    assert cg.interior_commutator_deviation(rep, 0.7) <= 1e-12
    assert cg.conjugation_check(rep, 0.0) == 0.0


def test_casimir_like_identity(fock):
    gamma = 0.3
    m = cg.rotation_metric(fock, gamma)
    X1, X2, _, _ = cg.deformed_pairs(fock, gamma)
    mask = np.ix_(fock.interior(fock.d - 6), fock.interior(fock.d - 6))
    r2 = fock.x1 @ fock.x1 + fock.x2 @ fock.x2
    assert linop.max_norm((X1 @ X1 + X2 @ X2 - m.rho_inv @ r2 @ m.rho)[mask]) < 1e-8


def test_free_oscillator_limit():
    g = cg.GridSpec(L=6.0, n=41, lam=1.0, phi=0.0)
    H, h = cg.build_grid_hamiltonians(g)
    assert np.array_equal(H.real, h)
    assert abs(np.linalg.eigvalsh(h)[0] - 1.0) < 1e-2
    # the ordering (exchange-odd) sector starts at 2, as the closed form says at lambda = 1
    assert abs(np.linalg.eigvalsh(cg.exchange_sector(h, g, -1))[0] - 2.0) < 2e-2
    assert cg.calogero_exact_spectrum(1.0, 1)[0] == 2.0
    assert cg.pt_residual_calogero(H, g) == 0.0


def test_pt_residual_calogero_negative_control():
    H, _ = cg.build_grid_hamiltonians(cg.GridSpec(L=5.0, n=21, lam=2.0, phi=0.3))
    g3 = cg.GridSpec(L=5.0, n=21, lam=2.0, phi=0.3)
    assert cg.pt_residual_calogero(H, g3) <= 1e-12
    x1, _ = cg.grid_coordinates(g3)
    broken = H + np.diag(0.1 * x1)
    assert cg.pt_residual_calogero(broken, g3) > 1e-3


def test_singular_grid_point_is_reported(monkeypatch, small_grid):
    x = np.array([0.0, 0.5])
    monkeypatch.setattr(cg, "grid_coordinates", lambda g: (x, x))
    with pytest.raises(SingularityError):
        cg.grid_potentials(small_grid)
