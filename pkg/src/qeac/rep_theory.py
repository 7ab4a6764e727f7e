"""Combinatorics of the su(2) tensor-product decomposition for L qubits.

The 2^L-dimensional register splits into irreducible total-spin-j blocks
with multiplicities n_j(L). Each block contributes exactly one collective
dark state (its lowest-weight vector), so the dark-subspace dimension is
N(L) = sum_j n_j(L) = binomial(L, ceil(L/2)). All multiplicities are exact
integers; j is carried as the integer two_j to avoid half-integer keys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InternalMismatchError

__all__ = [
    "IrrepTable",
    "irrep_multiplicities",
    "catalan_multiplicity",
    "dark_count",
    "efficiency",
    "efficiency_asymptote",
    "table_entry",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class IrrepTable:
    """Multiplicities n_j(L) of the (2j+1)-dimensional blocks, keyed by two_j."""

    L: int
    entries: dict[int, int]

    def multiplicity(self, two_j: int) -> int:
        return self.entries.get(two_j, 0)

    def two_j_values(self) -> list[int]:
        """Occurring two_j keys, descending (highest spin first)."""
        return sorted(self.entries, reverse=True)

    def dimension_total(self) -> int:
        """sum_j n_j * (2j+1); equals 2^L for a correct table."""
        return sum(n * (two_j + 1) for two_j, n in self.entries.items())


def _odd_step(even: dict[int, int]) -> dict[int, int]:
    # 2l -> 2l+1 qubits: n_j = n_{j+1/2} + n_{j-1/2}, j half-integer.
    out: dict[int, int] = {}
    top = max(even) + 1
    for two_j in range(1, top + 1, 2):
        n = even.get(two_j + 1, 0) + even.get(two_j - 1, 0)
        if n:
            out[two_j] = n
    return out


def _even_step(even: dict[int, int]) -> dict[int, int]:
    # 2l -> 2l+2 qubits: n_j = 2 n_j + n_{j-1} + n_{j+1} for j >= 1.
    # j = 0 only descends from the intermediate j = 1/2 blocks, so n_0 enters
    # once, not twice: n_0(2l+2) = n_0(2l) + n_1(2l).
    out: dict[int, int] = {}
    top = max(even) + 2
    n0 = even.get(0, 0) + even.get(2, 0)
    if n0:
        out[0] = n0
    for two_j in range(2, top + 1, 2):
        n = 2 * even.get(two_j, 0) + even.get(two_j - 2, 0) + even.get(two_j + 2, 0)
        if n:
            out[two_j] = n
    return out


def irrep_multiplicities(L: int) -> IrrepTable:
    """Decomposition multiplicities of the L-fold spin-1/2 tensor product.

    Built by the two-step recursion (odd step then even step) seeded with the
    two-qubit split D_1 + D_0; the single qubit is the trivial base {j=1/2: 1}.
    """
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    if L == 1:
        return IrrepTable(1, {1: 1})
    even = {2: 1, 0: 1}
    n_qubits = 2
    while n_qubits < L:
        if L == n_qubits + 1:
            return IrrepTable(L, _odd_step(even))
        even = _even_step(even)
        n_qubits += 2
    return IrrepTable(L, dict(even))


def catalan_multiplicity(l: int) -> int:
    """Multiplicity n_0(2l) of the singlet block: (2l)! / (l! (l+1)!)."""
    if l < 1:
        raise ValueError(f"l must be at least 1, got {l}")
    return math.factorial(2 * l) // (math.factorial(l) * math.factorial(l + 1))


def dark_count(L: int) -> int:
    """Number of orthogonal collective dark states N(L).

    Evaluates both the doubling recursion N(2l+1) = 2N(2l) - n_0(2l),
    N(2l+2) = 2N(2l+1) seeded with N(2) = 2, and the closed form
    binomial(L, ceil(L/2)), and insists they agree.
    """
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    closed_form = math.comb(L, (L + 1) // 2)
    if L == 1:
        return closed_form
    recursion = 2
    for n_qubits in range(3, L + 1):
        if n_qubits % 2 == 1:
            recursion = 2 * recursion - catalan_multiplicity((n_qubits - 1) // 2)
        else:
            recursion = 2 * recursion
    if recursion != closed_form:
        raise InternalMismatchError(
            f"N({L}): recursion gives {recursion}, closed form {closed_form}"
        )
    return closed_form


def efficiency(L: int) -> float:
    """Code efficiency (1/L) log2 N(L), via log-gamma so large L cannot overflow."""
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    k = (L + 1) // 2
    log2_n = (
        math.lgamma(L + 1) - math.lgamma(k + 1) - math.lgamma(L - k + 1)
    ) / _LN2
    return log2_n / L


def efficiency_asymptote(L: int) -> float:
    """Large-L approximation 1 - (1/2L) log2(pi L / 2); loose for small L."""
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    return 1.0 - math.log2(math.pi * L / 2.0) / (2.0 * L)


def table_entry(L: int) -> dict:
    """JSON-ready row: multiplicities (descending two_j), N(L) and efficiency."""
    table = irrep_multiplicities(L)
    return {
        "L": L,
        "multiplicities": [
            {"two_j": two_j, "n": table.entries[two_j]}
            for two_j in table.two_j_values()
        ],
        "dark_count": dark_count(L),
        "efficiency": efficiency(L),
    }
