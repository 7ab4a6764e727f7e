"""Request and response schemas for the HTTP service.

Complex amplitudes travel as [re, im] pairs; plain numbers are accepted on
input where an amplitude is real. Field names follow the wire formats, with
Python-side aliases where a name would collide ("pass", "copy").
"""
from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

ComplexLike = Union[float, int, tuple[float, float], list[float]]


def to_complex(value: ComplexLike) -> complex:
    """Coerce a JSON number or [re, im] pair into a complex value."""
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def from_complex(z: complex) -> tuple[float, float]:
    return (float(z.real), float(z.imag))


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    version: str


class MultiplicityEntry(BaseModel):
    two_j: int
    n: int


class TableRow(BaseModel):
    """One register size: block multiplicities, dark count, efficiency."""

    L: int
    multiplicities: list[MultiplicityEntry]
    dark_count: int
    efficiency: float
    asymptote: float
    gap: float


class TableResponse(BaseModel):
    command: Literal["table"] = "table"
    rows: list[TableRow]


class CodewordLabel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    two_j: int
    two_mj: int
    copy_index: int = Field(alias="copy")


class CodewordModel(BaseModel):
    label: CodewordLabel
    amplitudes: list[tuple[float, float]]


class CodesResponse(BaseModel):
    command: Literal["codes"] = "codes"
    L: int
    source: Literal["computed", "reference"]
    codewords: list[CodewordModel]


class CheckResult(BaseModel):
    """A named residual with its pass/fail verdict."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    residual: float
    passed: bool = Field(alias="pass")


class VerifyRequest(BaseModel):
    L: int = Field(ge=2, le=8)


class VerifyResponse(BaseModel):
    command: Literal["verify"] = "verify"
    L: int
    checks: list[CheckResult]
    passed: bool


class GeometryModel(BaseModel):
    """Qubit positions and bath parameters, SI units."""

    positions_m: list[tuple[float, float, float]] = Field(min_length=1)
    omega0_rad_s: float = Field(gt=0.0)
    v0_m_s: float = Field(gt=0.0)


class InitialStateSpec(BaseModel):
    """Exactly one way of naming the initial pure state.

    Either the (c0, c1) pair for the two-qubit encoder, the singlet flag,
    dark-basis weights, raw register amplitudes, or a computational
    bitstring.
    """

    c0: ComplexLike | None = None
    c1: ComplexLike | None = None
    singlet: bool = False
    dark: list[ComplexLike] | None = None
    state: list[ComplexLike] | None = None
    bitstring: str | None = Field(default=None, pattern="^[01]+$")

    @model_validator(mode="after")
    def _single_style(self) -> "InitialStateSpec":
        if (self.c0 is None) != (self.c1 is None):
            raise ValueError("c0 and c1 must be given together")
        styles = [
            self.c0 is not None,
            self.singlet,
            self.dark is not None,
            self.state is not None,
            self.bitstring is not None,
        ]
        if sum(styles) != 1:
            raise ValueError(
                "specify exactly one of: (c0, c1), singlet, dark, state, bitstring"
            )
        return self


class EvolveRequest(BaseModel):
    """Master-equation run: damping model, grid, and initial state."""

    model: Literal["collective", "independent", "correlated"] = "collective"
    L: int | None = Field(default=None, ge=1, le=10)
    gamma0: float = Field(default=1.0, gt=0.0)
    delta0: float = 0.0
    delta_model: Literal["zero", "collective", "cos"] = "zero"
    t_max: float = Field(default=5.0, gt=0.0)
    dt: float = Field(default=1e-3, gt=0.0)
    samples: int = Field(default=101, ge=2)
    geometry: GeometryModel | None = None
    initial: InitialStateSpec


class TimeSeriesModel(BaseModel):
    t: list[float]
    fidelity: list[float]
    trace: list[float]
    purity: list[float]
    excitation: list[float]


class EvolveResponse(BaseModel):
    command: Literal["evolve"] = "evolve"
    L: int
    model: str
    series: TimeSeriesModel


class TrajectoriesRequest(BaseModel):
    """Stochastic unravelling run, compared against the master solution."""

    model: Literal["collective", "independent", "correlated"] = "collective"
    L: int | None = Field(default=None, ge=1, le=10)
    gamma0: float = Field(default=1.0, gt=0.0)
    delta0: float = 0.0
    delta_model: Literal["zero", "collective", "cos"] = "zero"
    t_max: float = Field(default=2.0, gt=0.0)
    dt: float = Field(default=1e-3, gt=0.0)
    samples: int = Field(default=101, ge=2)
    n_traj: int = Field(default=1000, ge=1)
    seed: int = 42
    threshold: float = Field(default=0.02, gt=0.0)
    geometry: GeometryModel | None = None
    initial: InitialStateSpec


class TrajectoriesResponse(BaseModel):
    command: Literal["trajectories"] = "trajectories"
    L: int
    model: str
    n_traj: int
    seed: int
    series: TimeSeriesModel
    trace_distance: list[float]
    total_jumps: int
    mean_jumps: float
    checks: list[CheckResult]


class SweepRequest(BaseModel):
    """Fidelity of one dark state versus qubit separation, collinear chain."""

    L: int = Field(default=3, ge=2, le=8)
    state_index: int = -1
    gamma0: float = Field(default=1.0, gt=0.0)
    t_max: float = Field(default=1.0, gt=0.0)
    dt: float = Field(default=1e-3, gt=0.0)
    k0d_max: float = Field(default=2.0, gt=0.0)
    k0d_step: float = Field(default=0.1, gt=0.0)


class SweepPoint(BaseModel):
    k0d: float
    fidelity: float


class SweepResponse(BaseModel):
    command: Literal["sweep-separation"] = "sweep-separation"
    L: int
    state_index: int
    points: list[SweepPoint]
    checks: list[CheckResult]


class EncodeRequest(BaseModel):
    c0: ComplexLike
    c1: ComplexLike


class EncodeResponse(BaseModel):
    command: Literal["encode"] = "encode"
    state: list[tuple[float, float]]
    dark_residual: float


class DecodeRequest(BaseModel):
    state: list[ComplexLike] = Field(min_length=4, max_length=4)


class DecodeResponse(BaseModel):
    command: Literal["decode"] = "decode"
    c0: tuple[float, float]
    c1: tuple[float, float]
    ancilla_residual: float


class ErrorResponse(BaseModel):
    error: str
    detail: str
