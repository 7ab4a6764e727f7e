"""Tests for the dense linear algebra helpers."""

import numpy as np
import pytest

from qeac.errors import InvalidStepError, NonHermitianError
from qeac.linalg import hermitian_eigensystem, kron, kron_all, orthonormal_kernel, rk4_integrate


def test_kron_matches_block_structure():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    b = np.eye(2)
    out = kron(a, b)
    assert out.shape == (4, 4)
    assert np.array_equal(out[:2, :2], a[0, 0] * b)
    assert np.array_equal(out[2:, :2], a[1, 0] * b)


def test_kron_all_is_left_associative():
    rng = np.random.default_rng(3)
    mats = [rng.normal(size=(2, 2)) for _ in range(3)]
    direct = kron(kron(mats[0], mats[1]), mats[2])
    assert np.allclose(kron_all(mats), direct, atol=1e-14)


def test_hermitian_eigensystem_diagonalizes():
    rng = np.random.default_rng(11)
    raw = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = raw + raw.conj().T
    values, vectors = hermitian_eigensystem(h)
    assert np.all(np.diff(values) >= 0.0)
    recon = vectors @ np.diag(values) @ vectors.conj().T
    assert np.max(np.abs(recon - h)) < 1e-12
    gram = vectors.conj().T @ vectors
    assert np.max(np.abs(gram - np.eye(6))) < 1e-12


def test_hermitian_eigensystem_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NonHermitianError):
        hermitian_eigensystem(bad)


def test_orthonormal_kernel_of_rank_one_matrix():
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    basis = orthonormal_kernel(a)
    assert basis.shape == (2, 1)
    assert np.max(np.abs(a @ basis)) < 1e-12
    assert abs(np.vdot(basis[:, 0], basis[:, 0]) - 1.0) < 1e-12


def test_orthonormal_kernel_empty_for_full_rank():
    assert orthonormal_kernel(np.eye(3)).shape == (3, 0)


def test_orthonormal_kernel_resolves_wide_null_spaces():
    # A 16x16 projector complement with an 11-dimensional kernel; the
    # eigenvalue floor must not swallow true zeros of a.conj().T @ a.
    rng = np.random.default_rng(5)
    raw = rng.normal(size=(16, 5)) + 1j * rng.normal(size=(16, 5))
    q, _ = np.linalg.qr(raw)
    a = q @ q.conj().T
    basis = orthonormal_kernel(a)
    assert basis.shape == (16, 11)
    assert np.max(np.abs(a @ basis)) < 1e-10
    gram = basis.conj().T @ basis
    assert np.max(np.abs(gram - np.eye(11))) < 1e-12


def test_rk4_integrate_matches_exponential_decay():
    def derivative(_, y):
        return -y

    t_grid = np.linspace(0.0, 2.0, 5)
    samples = rk4_integrate(derivative, np.array([1.0 + 0.0j]), t_grid, 1e-3)
    assert len(samples) == 5
    stacked = np.stack(samples)
    assert np.max(np.abs(stacked[:, 0] - np.exp(-t_grid))) < 1e-10


def test_rk4_integrate_rejects_bad_steps():
    t_grid = np.array([0.0, 1.0])
    with pytest.raises(InvalidStepError):
        rk4_integrate(lambda t, y: y, np.array([1.0]), t_grid, 0.0)
    with pytest.raises(InvalidStepError):
        rk4_integrate(lambda t, y: y, np.array([1.0]), t_grid, 0.3)
