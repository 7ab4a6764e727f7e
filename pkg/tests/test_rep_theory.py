"""Tests for the total-spin decomposition combinatorics."""

import math

import numpy as np
import pytest

from qeac.linalg import hermitian_eigensystem
from qeac.rep_theory import (
    catalan_multiplicity,
    dark_count,
    efficiency,
    efficiency_asymptote,
    irrep_multiplicities,
    table_entry,
)
from qeac.spin_ops import collective_operators


def test_small_tables_by_hand():
    assert irrep_multiplicities(1).entries == {1: 1}
    assert irrep_multiplicities(2).entries == {2: 1, 0: 1}
    assert irrep_multiplicities(3).entries == {3: 1, 1: 2}
    assert irrep_multiplicities(4).entries == {4: 1, 2: 3, 0: 2}


def test_dimension_and_parity_sum_rules():
    for L in range(1, 21):
        table = irrep_multiplicities(L)
        assert table.dimension_total() == 2**L
        for two_j in table.entries:
            assert two_j % 2 == L % 2
            assert table.entries[two_j] > 0
        assert table.multiplicity(L) == 1
        assert table.multiplicity(L + 2) == 0


def test_multiplicities_match_spectral_count():
    # Count eigenvalues j(j+1) of S^2 directly; each block of spin j shows
    # up 2j+1 times per copy.
    for L in range(1, 9):
        table = irrep_multiplicities(L)
        values, _ = hermitian_eigensystem(collective_operators(L).s_squared)
        for two_j, n in table.entries.items():
            j = two_j / 2.0
            hits = int(np.sum(np.abs(values - j * (j + 1)) < 1e-8))
            assert hits == n * (two_j + 1)


def test_singlet_multiplicity_is_catalan():
    assert [catalan_multiplicity(l) for l in range(1, 5)] == [1, 2, 5, 14]
    for l in range(1, 5):
        assert irrep_multiplicities(2 * l).multiplicity(0) == catalan_multiplicity(l)


def test_dark_count_values_and_consistency():
    expected = [1, 2, 3, 6, 10, 20, 35, 70, 126, 252]
    assert [dark_count(L) for L in range(1, 11)] == expected
    for L in range(1, 21):
        table = irrep_multiplicities(L)
        assert sum(table.entries.values()) == dark_count(L)
        assert dark_count(L) == math.comb(L, (L + 1) // 2)


def test_efficiency_exact_points():
    assert abs(efficiency(2) - 0.5) < 1e-12
    assert abs(efficiency(3) - math.log2(3.0) / 3.0) < 1e-12
    assert abs(efficiency(4) - (1.0 + math.log2(3.0)) / 4.0) < 1e-12


def test_efficiency_approaches_asymptote():
    gaps = [abs(efficiency(L) - efficiency_asymptote(L)) for L in (20, 50, 100)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3
    assert efficiency(100_000) < 1.0


def test_table_entry_schema():
    row = table_entry(4)
    assert row["L"] == 4
    assert row["dark_count"] == 6
    assert [m["two_j"] for m in row["multiplicities"]] == [4, 2, 0]
    assert [m["n"] for m in row["multiplicities"]] == [1, 3, 2]
    assert abs(row["efficiency"] - (1.0 + math.log2(3.0)) / 4.0) < 1e-12


def test_argument_guards():
    with pytest.raises(ValueError):
        irrep_multiplicities(0)
    with pytest.raises(ValueError):
        dark_count(0)
    with pytest.raises(ValueError):
        catalan_multiplicity(0)
    with pytest.raises(ValueError):
        efficiency(0)
