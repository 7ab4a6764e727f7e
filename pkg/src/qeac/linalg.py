"""Dense complex linear-algebra substrate.

Kronecker products, Hermitian eigensystems, orthonormal kernel bases and a
fixed-step RK4 integrator. Everything operates on plain numpy arrays with
complex128 entries; all tolerances are explicit parameters.
"""
from __future__ import annotations

from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidStepError, NonHermitianError

__all__ = [
    "kron",
    "kron_all",
    "hermitian_eigensystem",
    "orthonormal_kernel",
    "rk4_integrate",
]


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product: (kron(a, b))[i*p+k, j*q+l] = a[i,j] * b[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Left-folded Kronecker product of a sequence of matrices."""
    if len(factors) == 0:
        raise ValueError("kron_all needs at least one factor")
    return reduce(kron, factors)


def hermitian_eigensystem(
    a: np.ndarray, tol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues real ascending and
    eigenvectors as orthonormal columns. Raises NonHermitianError when
    max|a - a^dag| exceeds tol.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    deviation = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if deviation > tol:
        raise NonHermitianError(
            f"max|a - a^dag| = {deviation:.3e} exceeds tol = {tol:.3e}"
        )
    # Symmetrize so roundoff in the input cannot leak into the factorization.
    h = 0.5 * (a + a.conj().T)
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return eigenvalues, eigenvectors


def orthonormal_kernel(a: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the numerical null space {v : a v = 0}.

    Computed from the eigendecomposition of a^dag a with eigenvalue threshold
    tol**2, so every returned column satisfies ||a v|| <= tol. Default
    tol = 1e-9 * ||a||_F. Returns a (n, nullity) array of columns; the array
    is empty for numerically invertible a.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if tol is None:
        tol = 1e-9 * float(np.linalg.norm(a))
    gram = a.conj().T @ a
    eigenvalues, eigenvectors = hermitian_eigensystem(
        gram, tol=1e-10 * max(1.0, float(np.max(np.abs(gram))) if gram.size else 1.0)
    )
    # The eigensolver resolves eigenvalues of the Gram matrix only to about
    # eps * ||gram||, so the zero cluster can sit above tol**2; threshold at
    # whichever floor is larger.
    lam_max = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    floor = gram.shape[0] * np.finfo(float).eps * max(lam_max, 0.0)
    keep = eigenvalues <= max(tol * tol, floor)
    return eigenvectors[:, keep]


def rk4_integrate(
    derivative: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_grid: Sequence[float],
    dt: float,
) -> list[np.ndarray]:
    """Classical fixed-step 4th-order Runge-Kutta on an array-valued state.

    Integrates y' = derivative(t, y) from t_grid[0], returning the state at
    every grid point (the first entry is y0 itself). dt must be positive and
    must divide every grid spacing to within 1e-12 absolute; the grid must be
    strictly increasing. Fully deterministic.
    """
    if dt <= 0.0:
        raise InvalidStepError(f"dt must be positive, got {dt}")
    t_grid = [float(t) for t in t_grid]
    if len(t_grid) == 0:
        raise ValueError("t_grid must contain at least one point")

    y = np.array(y0, dtype=complex)
    states = [y.copy()]
    t = t_grid[0]
    for t_next in t_grid[1:]:
        span = t_next - t
        if span <= 0.0:
            raise ValueError("t_grid must be strictly increasing")
        n_steps = int(round(span / dt))
        if n_steps < 1 or abs(n_steps * dt - span) > 1e-12 * max(1.0, abs(t_next)):
            raise InvalidStepError(
                f"dt = {dt} does not divide grid spacing {span} at t = {t}"
            )
        for k in range(n_steps):
            tk = t + k * dt
            k1 = derivative(tk, y)
            k2 = derivative(tk + 0.5 * dt, y + (0.5 * dt) * k1)
            k3 = derivative(tk + 0.5 * dt, y + (0.5 * dt) * k2)
            k4 = derivative(tk + dt, y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t_next
        states.append(y.copy())
    return states
