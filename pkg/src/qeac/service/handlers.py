"""Request handlers: the service logic, independent of any transport.

Each handler takes a request model and returns a response model, raising
QeacError subclasses or ValueError on bad physics or bad arguments. The
HTTP app and the command line both call these directly, so one code path
serves both transports.
"""
from __future__ import annotations

import numpy as np

from .. import __version__
from ..circuits import decode_two_bit, encode_two_bit
from ..dark_codes import (
    compute_dark_basis,
    computed_codewords,
    dark_residual,
    logical_encode,
    reference_codewords,
    span_distance,
)
from ..dynamics import (
    TrajectoryConfig,
    coupling_operator,
    ensemble_average,
    evolve_master,
    jump_channels,
    metrics_from_states,
    sample_grid,
    trace_distance,
)
from ..errors import NotNormalizedError
from ..noise_field import (
    DampingModel,
    Geometry,
    collective_model,
    correlated_model,
    independent_model,
)
from ..rep_theory import dark_count, efficiency, efficiency_asymptote, table_entry
from ..spin_ops import collective_operators
from .models import (
    CheckResult,
    CodesResponse,
    CodewordLabel,
    CodewordModel,
    DecodeRequest,
    DecodeResponse,
    EncodeRequest,
    EncodeResponse,
    EvolveRequest,
    EvolveResponse,
    GeometryModel,
    HealthResponse,
    InitialStateSpec,
    MultiplicityEntry,
    SweepPoint,
    SweepRequest,
    SweepResponse,
    TableResponse,
    TableRow,
    TimeSeriesModel,
    TrajectoriesRequest,
    TrajectoriesResponse,
    VerifyRequest,
    VerifyResponse,
    from_complex,
    to_complex,
)

__all__ = [
    "handle_health",
    "handle_table",
    "handle_codes",
    "handle_verify",
    "handle_evolve",
    "handle_trajectories",
    "handle_sweep",
    "handle_encode",
    "handle_decode",
]


def handle_health() -> HealthResponse:
    return HealthResponse(version=__version__)


def handle_table(l_max: int) -> TableResponse:
    if not (1 <= l_max <= 200):
        raise ValueError(f"l_max must be in 1..200, got {l_max}")
    rows = []
    for L in range(1, l_max + 1):
        entry = table_entry(L)
        asym = efficiency_asymptote(L)
        rows.append(
            TableRow(
                L=L,
                multiplicities=[MultiplicityEntry(**m) for m in entry["multiplicities"]],
                dark_count=entry["dark_count"],
                efficiency=entry["efficiency"],
                asymptote=asym,
                gap=abs(entry["efficiency"] - asym),
            )
        )
    return TableResponse(rows=rows)


def handle_codes(L: int, source: str = "computed") -> CodesResponse:
    if source not in ("computed", "reference"):
        raise ValueError(f"source must be 'computed' or 'reference', got {source!r}")
    spec = computed_codewords(L) if source == "computed" else reference_codewords(L)
    return CodesResponse(
        L=spec.L,
        source=spec.source,
        codewords=[
            CodewordModel(
                label=CodewordLabel(
                    two_j=label.two_j, two_mj=label.two_mj, copy_index=label.copy
                ),
                amplitudes=[from_complex(z) for z in vec],
            )
            for label, vec in zip(spec.labels, spec.codewords)
        ],
    )


def handle_verify(request: VerifyRequest) -> VerifyResponse:
    """Run the structural checks for one register size.

    Covers the kernel count, orthonormality, darkness and spin labels of
    the computed basis, and (L <= 4) agreement with the explicit codewords.
    """
    L = request.L
    basis = compute_dark_basis(L)
    ops = collective_operators(L)
    checks: list[CheckResult] = []

    expected = dark_count(L)
    checks.append(
        CheckResult(
            name="kernel_count",
            residual=float(abs(len(basis) - expected)),
            passed=len(basis) == expected,
        )
    )

    gram = np.array([[u.conj() @ v for v in basis.vectors] for u in basis.vectors])
    gram_residual = float(np.abs(gram - np.eye(len(basis))).max())
    checks.append(
        CheckResult(name="orthonormality", residual=gram_residual, passed=gram_residual <= 1e-12)
    )

    dark_res = max(dark_residual(v, L) for v in basis.vectors)
    checks.append(
        CheckResult(name="dark_residual", residual=dark_res, passed=dark_res <= 1e-12)
    )

    spin_res = max(
        float(np.linalg.norm(ops.s_squared @ v - 0.5 * two_j * (0.5 * two_j + 1.0) * v))
        for v, (two_j, _) in zip(basis.vectors, basis.labels)
    )
    checks.append(
        CheckResult(name="spin_labels", residual=spin_res, passed=spin_res <= 1e-9)
    )

    if L <= 4:
        ref = reference_codewords(L)
        ref_gram = np.array(
            [[u.conj() @ v for v in ref.codewords] for u in ref.codewords]
        )
        ref_gram_residual = float(np.abs(ref_gram - np.eye(len(ref.codewords))).max())
        checks.append(
            CheckResult(
                name="reference_orthonormality",
                residual=ref_gram_residual,
                passed=ref_gram_residual <= 1e-12,
            )
        )
        ref_dark = max(dark_residual(v, L) for v in ref.codewords)
        checks.append(
            CheckResult(name="reference_dark_residual", residual=ref_dark, passed=ref_dark <= 1e-12)
        )
        span_res = span_distance(ref.codewords, basis.vectors)
        checks.append(
            CheckResult(name="reference_span", residual=span_res, passed=span_res <= 1e-10)
        )

    return VerifyResponse(L=L, checks=checks, passed=all(c.passed for c in checks))


def _geometry(model: GeometryModel) -> Geometry:
    return Geometry(
        positions=np.asarray(model.positions_m, dtype=float),
        omega0=model.omega0_rad_s,
        v0=model.v0_m_s,
    )


def _infer_register_size(
    kind: str,
    L: int | None,
    geometry: GeometryModel | None,
    initial: InitialStateSpec,
) -> int:
    if kind == "correlated":
        if geometry is None:
            raise ValueError("correlated model requires a geometry")
        size = len(geometry.positions_m)
        if L is not None and L != size:
            raise ValueError(f"L={L} disagrees with the {size} geometry positions")
        return size
    if L is not None:
        return L
    if initial.bitstring is not None:
        return len(initial.bitstring)
    if initial.state is not None:
        size = int(np.log2(len(initial.state)))
        if 2**size != len(initial.state):
            raise ValueError(f"state length {len(initial.state)} is not a power of 2")
        return size
    if initial.c0 is not None or initial.singlet:
        return 2
    raise ValueError("L is required when the initial state is given as dark weights")


def _build_model(
    kind: str,
    L: int,
    gamma0: float,
    delta0: float,
    delta_model: str,
    geometry: GeometryModel | None,
) -> DampingModel:
    if kind == "collective":
        return collective_model(L, gamma0, delta0)
    if kind == "independent":
        if delta0 != 0.0:
            raise ValueError("independent damping has no Lamb shifts; set delta0 = 0")
        return independent_model(L, gamma0)
    return correlated_model(_geometry(geometry), gamma0, delta0, delta_model)


def _resolve_initial(spec: InitialStateSpec, L: int) -> np.ndarray:
    """Turn an InitialStateSpec into a unit vector on the L-qubit register."""
    dim = 2**L
    if spec.c0 is not None:
        if L != 2:
            raise ValueError("c0/c1 input targets the two-qubit encoder; use L = 2")
        return encode_two_bit(to_complex(spec.c0), to_complex(spec.c1))
    if spec.singlet:
        if L != 2:
            raise ValueError("the singlet is a two-qubit state; use L = 2")
        psi = np.zeros(4, dtype=complex)
        psi[1] = np.sqrt(0.5)
        psi[2] = -np.sqrt(0.5)
        return psi
    if spec.dark is not None:
        return logical_encode(L, [to_complex(z) for z in spec.dark])
    if spec.state is not None:
        psi = np.asarray([to_complex(z) for z in spec.state], dtype=complex)
        if psi.shape != (dim,):
            raise ValueError(f"state must have {dim} amplitudes for L={L}, got {psi.shape[0]}")
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-10:
            raise NotNormalizedError(f"state norm {norm!r} is not 1")
        return psi
    if len(spec.bitstring) != L:
        raise ValueError(f"bitstring {spec.bitstring!r} does not address {L} qubits")
    psi = np.zeros(dim, dtype=complex)
    psi[int(spec.bitstring, 2)] = 1.0
    return psi


def _series(result) -> TimeSeriesModel:
    return TimeSeriesModel(
        t=[float(v) for v in result.times],
        fidelity=[float(v) for v in result.fidelity],
        trace=[float(v) for v in result.trace],
        purity=[float(v) for v in result.purity],
        excitation=[float(v) for v in result.excitation],
    )


def handle_evolve(request: EvolveRequest) -> EvolveResponse:
    L = _infer_register_size(request.model, request.L, request.geometry, request.initial)
    model = _build_model(
        request.model, L, request.gamma0, request.delta0, request.delta_model, request.geometry
    )
    psi = _resolve_initial(request.initial, L)
    times, _, _ = sample_grid(request.t_max, request.dt, request.samples)
    result = evolve_master(
        np.outer(psi, psi.conj()), model, times, request.dt, psi_ref=psi
    )
    return EvolveResponse(L=L, model=request.model, series=_series(result))


def handle_trajectories(request: TrajectoriesRequest) -> TrajectoriesResponse:
    L = _infer_register_size(request.model, request.L, request.geometry, request.initial)
    model = _build_model(
        request.model, L, request.gamma0, request.delta0, request.delta_model, request.geometry
    )
    psi = _resolve_initial(request.initial, L)
    channels = jump_channels(model, collective_operators(L))
    lamb = coupling_operator(model.delta, L) if np.any(model.delta != 0.0) else None
    config = TrajectoryConfig(
        dt=request.dt,
        t_max=request.t_max,
        n_traj=request.n_traj,
        seed=request.seed,
        samples=request.samples,
    )
    ensemble = ensemble_average(psi, channels, config, lamb=lamb)
    master = evolve_master(
        np.outer(psi, psi.conj()), model, ensemble.times, request.dt,
        psi_ref=psi, store_states=True,
    )
    distances = [
        trace_distance(rho, ref) for rho, ref in zip(ensemble.rhos, master.states)
    ]
    series = metrics_from_states(ensemble.times, ensemble.rhos, L, psi_ref=psi)
    worst = max(distances)
    total_jumps = int(ensemble.jumps_per_trajectory.sum())
    checks = [
        CheckResult(
            name="max_trace_distance", residual=worst, passed=worst <= request.threshold
        ),
    ]
    return TrajectoriesResponse(
        L=L,
        model=request.model,
        n_traj=request.n_traj,
        seed=request.seed,
        series=_series(series),
        trace_distance=[float(d) for d in distances],
        total_jumps=total_jumps,
        mean_jumps=total_jumps / request.n_traj,
        checks=checks,
    )


def handle_sweep(request: SweepRequest) -> SweepResponse:
    """Dark-state fidelity versus k0*d for an equally spaced collinear chain.

    k0d = 0 uses the collective model exactly; each positive point builds
    the sinc-kernel damping matrix for spacing d with omega0 = v0 = 1.
    """
    basis = compute_dark_basis(request.L)
    index = request.state_index
    if not (-len(basis) <= index < len(basis)):
        raise ValueError(
            f"state_index {index} outside the {len(basis)}-dimensional dark basis"
        )
    psi = basis.vectors[index]
    rho0 = np.outer(psi, psi.conj())
    times, _, _ = sample_grid(request.t_max, request.dt, 2)

    n_points = int(round(request.k0d_max / request.k0d_step))
    points = []
    for i in range(n_points + 1):
        k0d = i * request.k0d_step
        if k0d == 0.0:
            model = collective_model(request.L, request.gamma0)
        else:
            positions = np.zeros((request.L, 3))
            positions[:, 0] = k0d * np.arange(request.L)
            geo = Geometry(positions=positions, omega0=1.0, v0=1.0)
            model = correlated_model(geo, request.gamma0)
        result = evolve_master(rho0, model, times, request.dt, psi_ref=psi)
        points.append(SweepPoint(k0d=k0d, fidelity=float(result.fidelity[-1])))

    fidelities = np.array([p.fidelity for p in points])
    rise = float(np.diff(fidelities).max()) if len(fidelities) > 1 else 0.0
    checks = [
        CheckResult(name="non_increasing", residual=max(rise, 0.0), passed=rise <= 1e-12),
    ]
    return SweepResponse(
        L=request.L,
        state_index=index % len(basis),
        points=points,
        checks=checks,
    )


def handle_encode(request: EncodeRequest) -> EncodeResponse:
    state = encode_two_bit(to_complex(request.c0), to_complex(request.c1))
    return EncodeResponse(
        state=[from_complex(z) for z in state],
        dark_residual=dark_residual(state, 2),
    )


def handle_decode(request: DecodeRequest) -> DecodeResponse:
    c0, c1, residual = decode_two_bit(
        np.asarray([to_complex(z) for z in request.state], dtype=complex)
    )
    return DecodeResponse(
        c0=from_complex(c0), c1=from_complex(c1), ancilla_residual=residual
    )
