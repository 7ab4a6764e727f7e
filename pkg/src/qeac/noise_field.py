"""Damping and Lamb-shift matrices from qubit geometry.

Whether damping is collective or independent is set by the ratio of the
largest qubit separation d to the noise field's effective wavelength
v0/omega0. The continuum kernel for an isotropic three-dimensional scalar
bath gives gamma_ij = gamma0 * sinc(k0 r_ij) with k0 = omega0/v0, which
interpolates between the two regimes and keeps the matrix positive
semidefinite for any geometry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotPSDError, SingularSeparationError

__all__ = [
    "Geometry",
    "DampingModel",
    "geometry_from_json",
    "geometry_to_json",
    "gamma_matrix",
    "delta_matrix",
    "collectivity_ratio",
    "collective_model",
    "independent_model",
    "correlated_model",
    "custom_model",
]

MODEL_KINDS = ("collective", "independent", "correlated", "custom")

DELTA_MODELS = ("zero", "collective", "cos")


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Geometry:
    """Qubit positions (meters) plus the bath's frequency and phase velocity."""

    positions: np.ndarray
    omega0: float
    v0: float

    def __post_init__(self) -> None:
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"positions must be (L, 3), got shape {pos.shape}")
        if not (self.omega0 > 0.0):
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not (self.v0 > 0.0):
            raise ValueError(f"v0 must be positive, got {self.v0}")
        object.__setattr__(self, "positions", _frozen(pos))

    @property
    def L(self) -> int:
        return self.positions.shape[0]

    @cached_property
    def separations(self) -> np.ndarray:
        """Pairwise distance matrix r_ij in meters."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return _frozen(np.sqrt((diff**2).sum(axis=2)))

    @property
    def wavenumber(self) -> float:
        """k0 = omega0 / v0, the bath wavenumber at resonance."""
        return self.omega0 / self.v0


def geometry_from_json(payload: str | dict) -> Geometry:
    """Parse {"positions_m": [[x,y,z],...], "omega0_rad_s": w, "v0_m_s": v}."""
    data = json.loads(payload) if isinstance(payload, str) else payload
    return Geometry(
        positions=np.asarray(data["positions_m"], dtype=float),
        omega0=float(data["omega0_rad_s"]),
        v0=float(data["v0_m_s"]),
    )


def geometry_to_json(g: Geometry) -> dict:
    return {
        "positions_m": g.positions.tolist(),
        "omega0_rad_s": g.omega0,
        "v0_m_s": g.v0,
    }


def gamma_matrix(g: Geometry, gamma0: float) -> np.ndarray:
    """Spatially-correlated damping rates gamma0 * sinc(k0 r_ij).

    The diagonal is exactly gamma0 and the matrix is symmetric by
    construction. The sinc kernel is positive semidefinite analytically;
    eigenvalues below -1e-8 * gamma0 * L mean the inputs are inconsistent
    and raise NotPSD.
    """
    if not (gamma0 > 0.0):
        raise ValueError(f"gamma0 must be positive, got {gamma0}")
    # np.sinc is sin(pi x)/(pi x); rescale so the argument is k0 r.
    out = gamma0 * np.sinc(g.wavenumber * g.separations / np.pi)
    np.fill_diagonal(out, gamma0)
    out = 0.5 * (out + out.T)
    low = float(np.linalg.eigvalsh(out)[0])
    if low < -1e-8 * gamma0 * g.L:
        raise NotPSDError(f"damping matrix has eigenvalue {low:.3e}")
    return out


def delta_matrix(g: Geometry, delta0: float = 0.0, model: str = "zero") -> np.ndarray:
    """Lamb-shift matrix; defaults to zero.

    "collective" fills every entry with delta0. "cos" is an exploratory
    cos(k0 r)/(k0 r) off-diagonal kernel (delta0 on the diagonal); it is a
    conventional closed form, not a calibrated one, and it diverges as
    separations vanish.
    """
    if model not in DELTA_MODELS:
        raise ValueError(f"model must be one of {DELTA_MODELS}, got {model!r}")
    L = g.L
    if model == "zero":
        return np.zeros((L, L))
    if model == "collective":
        return np.full((L, L), float(delta0))
    phase = g.wavenumber * g.separations
    off = ~np.eye(L, dtype=bool)
    if np.any(phase[off] < 1e-6):
        raise SingularSeparationError(
            "cos kernel requires k0 * r >= 1e-6 for every distinct pair"
        )
    out = np.full((L, L), float(delta0))
    out[off] = delta0 * np.cos(phase[off]) / phase[off]
    return 0.5 * (out + out.T)


def collectivity_ratio(g: Geometry) -> float:
    """d * omega0 / v0 for the largest separation d; << 1 means collective."""
    if g.L < 2:
        raise ValueError("collectivity ratio needs at least 2 positions")
    return float(g.separations.max()) * g.wavenumber


@dataclass(frozen=True)
class DampingModel:
    """Validated (gamma, delta) matrix pair driving the master equation."""

    L: int
    gamma: np.ndarray
    delta: np.ndarray
    kind: str = field(default="custom")

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"kind must be one of {MODEL_KINDS}, got {self.kind!r}")
        gamma = np.asarray(self.gamma, dtype=float)
        delta = np.asarray(self.delta, dtype=float)
        shape = (self.L, self.L)
        if gamma.shape != shape or delta.shape != shape:
            raise ValueError(
                f"gamma/delta must be {shape}, got {gamma.shape} and {delta.shape}"
            )
        scale = max(float(np.abs(gamma).max()), 1e-300)
        if np.abs(gamma - gamma.T).max() > 1e-12 * scale:
            raise ValueError("gamma matrix must be symmetric")
        if np.abs(delta - delta.T).max() > 1e-12 * max(float(np.abs(delta).max()), 1.0):
            raise ValueError("delta matrix must be symmetric")
        diag = np.diag(gamma)
        if not (diag[0] > 0.0) or np.abs(diag - diag[0]).max() > 1e-12 * diag[0]:
            raise ValueError("gamma diagonal must be uniform and positive")
        low = float(np.linalg.eigvalsh(gamma)[0])
        if low < -1e-8 * diag[0] * self.L:
            raise NotPSDError(f"gamma has eigenvalue {low:.3e}")
        object.__setattr__(self, "gamma", _frozen(gamma))
        object.__setattr__(self, "delta", _frozen(delta))

    @property
    def gamma0(self) -> float:
        """The uniform single-qubit decay rate (diagonal of gamma)."""
        return float(self.gamma[0, 0])


def collective_model(L: int, gamma0: float = 1.0, delta0: float = 0.0) -> DampingModel:
    """All qubits couple to one bath pattern: gamma_ij = gamma0, delta_ij = delta0."""
    return DampingModel(
        L=L,
        gamma=np.full((L, L), float(gamma0)),
        delta=np.full((L, L), float(delta0)),
        kind="collective",
    )


def independent_model(L: int, gamma0: float = 1.0) -> DampingModel:
    """Each qubit damps on its own: gamma = gamma0 * I, no Lamb shifts."""
    return DampingModel(
        L=L,
        gamma=float(gamma0) * np.eye(L),
        delta=np.zeros((L, L)),
        kind="independent",
    )


def correlated_model(
    g: Geometry,
    gamma0: float = 1.0,
    delta0: float = 0.0,
    delta_model: str = "zero",
) -> DampingModel:
    """Geometry-derived rates via the sinc kernel (and optional Lamb model)."""
    return DampingModel(
        L=g.L,
        gamma=gamma_matrix(g, gamma0),
        delta=delta_matrix(g, delta0, delta_model),
        kind="correlated",
    )


def custom_model(gamma: np.ndarray, delta: np.ndarray | None = None) -> DampingModel:
    """Wrap caller-supplied matrices, running the full validation."""
    gamma = np.asarray(gamma, dtype=float)
    L = gamma.shape[0]
    if delta is None:
        delta = np.zeros((L, L))
    return DampingModel(L=L, gamma=gamma, delta=np.asarray(delta, dtype=float), kind="custom")
