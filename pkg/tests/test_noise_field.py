"""Tests for geometry-derived damping and Lamb-shift matrices."""

import numpy as np
import pytest

from qeac.errors import NotPSDError, SingularSeparationError
from qeac.noise_field import (
    Geometry,
    collective_model,
    collectivity_ratio,
    correlated_model,
    custom_model,
    delta_matrix,
    gamma_matrix,
    geometry_from_json,
    geometry_to_json,
    independent_model,
)


def collinear(L, spacing, omega0=1.0, v0=1.0):
    positions = np.zeros((L, 3))
    positions[:, 0] = spacing * np.arange(L)
    return Geometry(positions=positions, omega0=omega0, v0=v0)


def test_sinc_kernel_values():
    g = collinear(2, 0.1)
    gamma = gamma_matrix(g, 1.0)
    assert abs(gamma[0, 1] - np.sin(0.1) / 0.1) < 1e-15
    assert gamma[0, 0] == 1.0
    g = collinear(2, np.pi)
    assert abs(gamma_matrix(g, 1.0)[0, 1]) < 1e-15
    g = collinear(2, 1.0)
    assert abs(gamma_matrix(g, 2.0)[0, 1] - 2.0 * np.sin(1.0)) < 1e-14


def test_coincident_positions_give_collective_rates():
    g = Geometry(positions=np.zeros((3, 3)), omega0=1.0, v0=1.0)
    gamma = gamma_matrix(g, 0.7)
    assert np.max(np.abs(gamma - 0.7)) < 1e-15


def test_gamma_matrix_is_psd_for_random_geometries():
    rng = np.random.default_rng(31)
    for _ in range(100):
        L = int(rng.integers(2, 6))
        positions = rng.normal(scale=2.0, size=(L, 3))
        g = Geometry(positions=positions, omega0=1.0, v0=1.0)
        gamma = gamma_matrix(g, 1.0)
        assert np.max(np.abs(gamma - gamma.T)) == 0.0
        assert float(np.linalg.eigvalsh(gamma)[0]) >= -1e-10


def test_collectivity_ratio():
    # 3 um spacing against a 1e14 rad/s bath at light speed: ratio 1.
    g = collinear(2, 3e-6, omega0=1e14, v0=3e8)
    assert abs(collectivity_ratio(g) - 1.0) < 1e-12
    assert collectivity_ratio(collinear(2, 0.0)) == 0.0
    with pytest.raises(ValueError):
        collectivity_ratio(collinear(1, 1.0))


def test_geometry_json_round_trip():
    g = collinear(3, 0.5, omega0=2.0, v0=4.0)
    data = geometry_to_json(g)
    back = geometry_from_json(data)
    assert np.array_equal(back.positions, g.positions)
    assert back.omega0 == g.omega0
    assert back.v0 == g.v0
    assert abs(back.wavenumber - 0.5) < 1e-15


def test_geometry_validation():
    with pytest.raises(ValueError):
        Geometry(positions=np.zeros((2, 2)), omega0=1.0, v0=1.0)
    with pytest.raises(ValueError):
        Geometry(positions=np.zeros((2, 3)), omega0=0.0, v0=1.0)
    with pytest.raises(ValueError):
        Geometry(positions=np.zeros((2, 3)), omega0=1.0, v0=-1.0)


def test_delta_models():
    g = collinear(2, 1.0)
    assert np.max(np.abs(delta_matrix(g))) == 0.0
    assert np.max(np.abs(delta_matrix(g, 3.0, "collective") - 3.0)) == 0.0
    cos_kernel = delta_matrix(g, 2.0, "cos")
    assert abs(cos_kernel[0, 1] - 2.0 * np.cos(1.0)) < 1e-14
    assert cos_kernel[0, 0] == 2.0
    with pytest.raises(SingularSeparationError):
        delta_matrix(collinear(2, 0.0), 1.0, "cos")
    with pytest.raises(ValueError):
        delta_matrix(g, 1.0, "sin")


def test_model_constructors():
    m = collective_model(3, 2.0, 0.5)
    assert m.kind == "collective"
    assert m.gamma0 == 2.0
    assert np.max(np.abs(m.gamma - 2.0)) == 0.0
    assert np.max(np.abs(m.delta - 0.5)) == 0.0

    m = independent_model(3, 2.0)
    assert np.array_equal(m.gamma, 2.0 * np.eye(3))
    assert np.max(np.abs(m.delta)) == 0.0

    m = correlated_model(collinear(2, 0.1), 1.0)
    assert m.kind == "correlated"
    assert abs(m.gamma[0, 1] - np.sin(0.1) / 0.1) < 1e-15

    m = custom_model(np.eye(2))
    assert m.kind == "custom"
    assert not m.gamma.flags.writeable


def test_model_validation_rejects_bad_matrices():
    with pytest.raises(ValueError):
        custom_model(np.array([[1.0, 0.5], [0.4, 1.0]]))  # asymmetric
    with pytest.raises(ValueError):
        custom_model(np.diag([1.0, 2.0]))  # non-uniform diagonal
    with pytest.raises(ValueError):
        custom_model(-np.eye(2))  # negative rates
    with pytest.raises(NotPSDError):
        custom_model(np.array([[1.0, 2.0], [2.0, 1.0]]))  # indefinite
