"""Single-site and collective spin operators for L qubits.

Basis convention used everywhere in this package: the computational index of
|q1 q2 ... qL> is b = sum_l q_l * 2**(L-l), i.e. qubit 1 is the most
significant bit. |0> is the ground state (z eigenvalue -1/2), |1> the
excited state (+1/2).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SiteOutOfRangeError, TooManyQubitsError
from .linalg import kron_all

MAX_QUBITS = 12  # dense 2^L operators; 4096 is the largest dimension we build

_SIGMA = {
    "minus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "plus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
    "z": np.array([[-0.5, 0.0], [0.0, 0.5]], dtype=complex),
}


@dataclass(frozen=True)
class CollectiveOperators:
    """Collective operators S+, S-, S^z and S^2 on the 2^L basis."""

    L: int
    s_plus: np.ndarray
    s_minus: np.ndarray
    s_z: np.ndarray
    s_squared: np.ndarray


def _check_register_size(L: int) -> None:
    if L < 1:
        raise ValueError(f"qubit count must be at least 1, got {L}")
    if L > MAX_QUBITS:
        raise TooManyQubitsError(f"L = {L} exceeds the dense guard of {MAX_QUBITS}")


def site_operator(L: int, site: int, kind: str) -> np.ndarray:
    """Operator acting as sigma^{kind} on one site and identity elsewhere.

    kind is one of "plus", "minus", "z"; site is 1-based, with site 1 on the
    most significant bit.
    """
    _check_register_size(L)
    if not 1 <= site <= L:
        raise SiteOutOfRangeError(f"site {site} outside 1..{L}")
    if kind not in _SIGMA:
        raise ValueError(f"kind must be one of {sorted(_SIGMA)}, got {kind!r}")
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (L - site), dtype=complex)
    return kron_all([left, _SIGMA[kind], right])


@lru_cache(maxsize=None)
def collective_operators(L: int) -> CollectiveOperators:
    """Build S- = sum_l s_l^-, its adjoint, S^z and the Casimir S^2.

    S^2 is assembled as (S+S- + S-S+)/2 + (S^z)^2. Results are cached and
    marked read-only; they are safe to share across threads.
    """
    _check_register_size(L)
    dim = 2**L
    s_minus = np.zeros((dim, dim), dtype=complex)
    s_z = np.zeros((dim, dim), dtype=complex)
    for site in range(1, L + 1):
        s_minus += site_operator(L, site, "minus")
        s_z += site_operator(L, site, "z")
    s_plus = s_minus.conj().T
    s_squared = 0.5 * (s_plus @ s_minus + s_minus @ s_plus) + s_z @ s_z
    for op in (s_plus, s_minus, s_z, s_squared):
        op.flags.writeable = False
    return CollectiveOperators(L, s_plus, s_minus, s_z, s_squared)


def excitation_operator(L: int) -> np.ndarray:
    """S+S-, whose expectation value is the collective excitation number."""
    ops = collective_operators(L)
    return ops.s_plus @ ops.s_minus
