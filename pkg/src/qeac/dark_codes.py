"""Dark-state bases and codewords for collective amplitude damping.

A state |psi> with S^- |psi> = 0 is invisible to the collective lowering
channel, so any superposition of such states is preserved exactly. This
module builds an orthonormal basis of that kernel, labels each vector by
its total-spin block, provides the small explicit codeword sets for
L = 2, 3, 4, and maps logical amplitudes onto the basis.

Basis-index convention: qubit 1 is the most significant bit, so a register
string q_1 q_2 ... q_L sits at index b = sum_l q_l 2^(L-l).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from .errors import (
    DimensionMismatchError,
    InternalMismatchError,
    NotNormalizedError,
    TooManyLogicalAmplitudesError,
    TooManyQubitsError,
    UnsupportedLError,
)
from .linalg import hermitian_eigensystem, orthonormal_kernel
from .rep_theory import dark_count, irrep_multiplicities
from .spin_ops import collective_operators

__all__ = [
    "CodeLabel",
    "DarkBasis",
    "CodeSpec",
    "compute_dark_basis",
    "reference_codewords",
    "computed_codewords",
    "dark_residual",
    "span_distance",
    "subspace_equal",
    "logical_encode",
    "codespec_to_json",
]

MAX_DARK_QUBITS = 10

# Amplitudes below this are treated as structural zeros when locating the
# leading entry of a basis vector; rejected projector columns sit far below.
_LEADING_TOL = 1e-8


@dataclass(frozen=True)
class CodeLabel:
    """Block label |j, m_j> with a copy index 1..n_j; j carried as two_j."""

    two_j: int
    two_mj: int
    copy: int


@dataclass(frozen=True)
class DarkBasis:
    """Orthonormal kernel basis of S^-, labelled (two_j, copy) per vector."""

    L: int
    vectors: tuple[np.ndarray, ...]
    labels: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class CodeSpec:
    """A codeword set: either the computed basis or the literal reference."""

    L: int
    codewords: tuple[np.ndarray, ...]
    labels: tuple[CodeLabel, ...]
    source: str


def _frozen(vec: np.ndarray) -> np.ndarray:
    out = np.asarray(vec, dtype=complex)
    out.flags.writeable = False
    return out


def _leading_index(vec: np.ndarray) -> int:
    nonzero = np.abs(vec) > _LEADING_TOL
    if not nonzero.any():
        raise InternalMismatchError("basis vector has no significant amplitude")
    return int(np.argmax(nonzero))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    lead = vec[_leading_index(vec)]
    return vec * (lead.conjugate() / abs(lead))


def _canonical_block(columns: np.ndarray) -> list[np.ndarray]:
    """Deterministic orthonormal basis of span(columns).

    Runs modified Gram-Schmidt over the columns of the block projector in
    basis-index order; the vector accepted at column b has its leading
    nonzero amplitude exactly at b, so the output order is canonical no
    matter how the eigensolver oriented the degenerate block.
    """
    dim, size = columns.shape
    projector = columns @ columns.conj().T
    accepted: list[np.ndarray] = []
    for b in range(dim):
        v = projector[:, b].copy()
        for u in accepted:
            v -= u * (u.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            accepted.append(_fix_phase(v / norm))
            if len(accepted) == size:
                break
    if len(accepted) != size:
        raise InternalMismatchError(
            f"projector sweep found {len(accepted)} vectors, expected {size}"
        )
    return accepted


def _check_register(L: int) -> None:
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    if L > MAX_DARK_QUBITS:
        raise TooManyQubitsError(
            f"dense dark-basis construction supports L <= {MAX_DARK_QUBITS}, got {L}"
        )


@lru_cache(maxsize=None)
def compute_dark_basis(L: int) -> DarkBasis:
    """Orthonormal basis of ker(S^-), labelled by total spin.

    The kernel is block-diagonalized with respect to S squared; within each
    degenerate block the basis is canonicalized by a projector-column sweep
    and phases are fixed so the leading amplitude is real positive. Vectors
    are ordered by ascending leading-amplitude position.
    """
    _check_register(L)
    ops = collective_operators(L)
    kernel = orthonormal_kernel(np.asarray(ops.s_minus))
    expected = dark_count(L)
    if kernel.shape[1] != expected:
        raise InternalMismatchError(
            f"kernel dimension {kernel.shape[1]} != dark count {expected} at L={L}"
        )
    s2_small = kernel.conj().T @ ops.s_squared @ kernel
    evals, evecs = hermitian_eigensystem(s2_small, tol=1e-8)
    # j(j+1) -> two_j, rounded to the exact integer
    two_js = np.rint(np.sqrt(4.0 * evals + 1.0) - 1.0).astype(int)

    entries: list[tuple[int, int, int, np.ndarray]] = []
    table = irrep_multiplicities(L)
    for two_j in sorted(set(two_js.tolist())):
        block = kernel @ evecs[:, two_js == two_j]
        if block.shape[1] != table.multiplicity(two_j):
            raise InternalMismatchError(
                f"block two_j={two_j} has {block.shape[1]} vectors,"
                f" expected {table.multiplicity(two_j)}"
            )
        for rank, vec in enumerate(_canonical_block(block)):
            entries.append((_leading_index(vec), -two_j, rank, vec))
    entries.sort(key=lambda e: e[:3])

    vectors = []
    labels = []
    copies: dict[int, int] = {}
    for _, neg_two_j, _, vec in entries:
        two_j = -neg_two_j
        copies[two_j] = copies.get(two_j, 0) + 1
        vectors.append(_frozen(vec))
        labels.append((two_j, copies[two_j]))
    return DarkBasis(L=L, vectors=tuple(vectors), labels=tuple(labels))


def _state(L: int, amplitudes: dict[int, float]) -> np.ndarray:
    vec = np.zeros(2**L, dtype=complex)
    for index, value in amplitudes.items():
        vec[index] = value
    return _frozen(vec)


def _reference_table() -> dict[int, tuple[tuple[CodeLabel, dict[int, float]], ...]]:
    r2 = sqrt(0.5)
    a3 = 1.0 / sqrt(6.0)
    c4 = 0.5 / sqrt(3.0)
    return {
        2: (
            (CodeLabel(0, 0, 1), {1: r2, 2: -r2}),
            (CodeLabel(2, -2, 1), {0: 1.0}),
        ),
        3: (
            (CodeLabel(1, -1, 1), {1: a3, 4: a3, 2: -2.0 * a3}),
            (CodeLabel(1, -1, 2), {1: r2, 4: -r2}),
            (CodeLabel(3, -3, 1), {0: 1.0}),
        ),
        4: (
            (CodeLabel(0, 0, 1), {5: 0.5, 6: -0.5, 9: -0.5, 10: 0.5}),
            (CodeLabel(0, 0, 2), {3: 2.0 * c4, 12: 2.0 * c4, 5: -c4, 6: -c4, 9: -c4, 10: -c4}),
            (CodeLabel(2, -2, 1), {4: r2, 8: -r2}),
            (CodeLabel(2, -2, 2), {1: r2, 2: -r2}),
            (CodeLabel(2, -2, 3), {4: 0.5, 8: 0.5, 1: -0.5, 2: -0.5}),
            (CodeLabel(4, -4, 1), {0: 1.0}),
        ),
    }


def reference_codewords(L: int) -> CodeSpec:
    """The explicit published codeword sets for L = 2, 3, 4, verbatim.

    Tensor products are expanded into the full register basis; the listing
    order and the block labels follow the source tables.
    """
    table = _reference_table()
    if L not in table:
        raise UnsupportedLError(f"explicit codewords exist for L in {{2, 3, 4}}, got {L}")
    labels = tuple(label for label, _ in table[L])
    words = tuple(_state(L, amps) for _, amps in table[L])
    return CodeSpec(L=L, codewords=words, labels=labels, source="reference")


def computed_codewords(L: int) -> CodeSpec:
    """The computed dark basis repackaged as a CodeSpec (two_mj = -two_j)."""
    basis = compute_dark_basis(L)
    labels = tuple(CodeLabel(two_j, -two_j, copy) for two_j, copy in basis.labels)
    return CodeSpec(L=L, codewords=basis.vectors, labels=labels, source="computed")


def dark_residual(state: np.ndarray, L: int) -> float:
    """Norm of S^- applied to the state; zero iff the state is dark."""
    vec = np.asarray(state, dtype=complex).ravel()
    dim = 2**L
    if vec.shape != (dim,):
        raise DimensionMismatchError(
            f"state has {vec.shape[0]} amplitudes, register L={L} needs {dim}"
        )
    return float(np.linalg.norm(collective_operators(L).s_minus @ vec))


def _span_projector(vectors) -> np.ndarray:
    stacked = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    keep = s > 1e-10 * max(s[0], 1.0)
    basis = u[:, keep]
    return basis @ basis.conj().T


def span_distance(a, b) -> float:
    """Frobenius distance between the orthogonal projectors onto span(a), span(b)."""
    pa = _span_projector(a)
    pb = _span_projector(b)
    if pa.shape != pb.shape:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {pa.shape[0]} vs {pb.shape[0]}"
        )
    return float(np.linalg.norm(pa - pb))


def subspace_equal(a, b, tol: float) -> bool:
    """True iff span(a) = span(b), by Frobenius distance of the projectors."""
    return span_distance(a, b) <= tol


def logical_encode(L: int, logical) -> np.ndarray:
    """Map K logical amplitudes onto the first K dark-basis vectors.

    The basis order is deterministic, so for L=2 the two slots are |00> and
    the singlet, matching the two-qubit encoding circuit.
    """
    amplitudes = np.asarray(logical, dtype=complex).ravel()
    capacity = dark_count(L)
    if amplitudes.shape[0] > capacity:
        raise TooManyLogicalAmplitudesError(
            f"{amplitudes.shape[0]} amplitudes exceed the {capacity}-dimensional"
            f" dark subspace at L={L}"
        )
    norm = np.linalg.norm(amplitudes)
    if abs(norm - 1.0) > 1e-12:
        raise NotNormalizedError(f"logical state norm {norm!r} is not 1")
    basis = compute_dark_basis(L)
    out = np.zeros(2**L, dtype=complex)
    for amp, vec in zip(amplitudes, basis.vectors):
        out += amp * vec
    return out


def codespec_to_json(spec: CodeSpec) -> dict:
    """JSON-ready form: per-codeword label and [re, im] amplitude pairs."""
    return {
        "L": spec.L,
        "codewords": [
            {
                "label": {
                    "two_j": label.two_j,
                    "two_mj": label.two_mj,
                    "copy": label.copy,
                },
                "amplitudes": [[float(z.real), float(z.imag)] for z in vec],
            }
            for label, vec in zip(spec.labels, spec.codewords)
        ],
    }
