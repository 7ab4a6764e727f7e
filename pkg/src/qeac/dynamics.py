"""Master-equation evolution and its quantum-trajectory unravelling.

The density matrix evolves under

    drho/dt = i sum_ij delta_ij [s_j^+ s_i^-, rho]
              + 1/2 sum_ij gamma_ij (2 s_i^- rho s_j^+
                                     - s_j^+ s_i^- rho - rho s_j^+ s_i^-),

integrated directly with fixed-step RK4 (no superoperator matrix is ever
built). The trajectory picture diagonalizes the gamma matrix into jump
operators J_k, propagates pure states with the non-Hermitian drift between
jumps, and collapses with probability dt * sum_k <J_k^+ J_k> per step.
Ensemble randomness is keyed by (seed, trajectory index), so averages do
not depend on scheduling.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidStepError,
    NonHermitianError,
    NotNormalizedError,
    NotPSDError,
    StepTooLargeError,
    TraceDriftError,
)
from .linalg import rk4_integrate
from .noise_field import DampingModel
from .spin_ops import CollectiveOperators, collective_operators, excitation_operator, site_operator

__all__ = [
    "JumpChannels",
    "TrajectoryConfig",
    "EvolutionResult",
    "TrajectoryResult",
    "EnsembleResult",
    "coupling_operator",
    "lindblad_generator",
    "evolve_master",
    "jump_channels",
    "drift_matrix",
    "run_trajectory",
    "ensemble_average",
    "trajectory_stream",
    "trace_distance",
    "sample_grid",
    "metrics_from_states",
    "write_timeseries_csv",
    "CSV_HEADER",
]

# Discard gamma eigenvalues below this fraction of gamma0 when building
# jump operators; keeps numerically-zero rates out of the channel list.
RATE_CUTOFF = 1e-12

# First-order jump sampling is invalid once the per-step probability is
# no longer small.
MAX_JUMP_PROBABILITY = 0.1

CSV_HEADER = "t,fidelity,trace,purity,excitation"

_SEED_MASK = (1 << 64) - 1


@lru_cache(maxsize=None)
def _lowering_stack(L: int) -> np.ndarray:
    stack = np.stack([site_operator(L, site, "minus") for site in range(1, L + 1)])
    stack.flags.writeable = False
    return stack


def coupling_operator(matrix: np.ndarray, L: int) -> np.ndarray:
    """sum_ij m_ij s_j^+ s_i^- for an L-site coefficient matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (L, L):
        raise DimensionMismatchError(f"coefficient matrix must be ({L}, {L}), got {m.shape}")
    stack = _lowering_stack(L)
    t = np.einsum("ij,iab->jab", m, stack)
    return np.einsum("jba,jbc->ac", stack.conj(), t)


@dataclass(frozen=True)
class JumpChannels:
    """Jump operators J_k = sqrt(rate_k) sum_i v_ki s_i^- with their rates."""

    L: int
    operators: tuple[np.ndarray, ...]
    rates: np.ndarray


@dataclass(frozen=True)
class TrajectoryConfig:
    """Step size, horizon, ensemble size, seed, and sample count."""

    dt: float
    t_max: float
    n_traj: int
    seed: int
    samples: int = 101

    def __post_init__(self) -> None:
        if not (self.dt > 0.0):
            raise InvalidStepError(f"dt must be positive, got {self.dt}")
        if not (self.t_max > 0.0):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.n_traj < 1:
            raise ValueError(f"n_traj must be at least 1, got {self.n_traj}")
        if self.samples < 2:
            raise ValueError(f"samples must be at least 2, got {self.samples}")


@dataclass(frozen=True)
class EvolutionResult:
    """Observable time series; density snapshots kept only when requested."""

    times: np.ndarray
    fidelity: np.ndarray
    trace: np.ndarray
    purity: np.ndarray
    excitation: np.ndarray
    states: tuple[np.ndarray, ...] | None = None


@dataclass(frozen=True)
class TrajectoryResult:
    """One pure-state path: sampled states plus the (time, channel) jump log."""

    times: np.ndarray
    states: tuple[np.ndarray, ...]
    jumps: tuple[tuple[float, int], ...]


@dataclass(frozen=True)
class EnsembleResult:
    """Trajectory-averaged density matrices at the sample times."""

    times: np.ndarray
    rhos: tuple[np.ndarray, ...]
    jumps_per_trajectory: np.ndarray
    n_traj: int


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.asarray(a)
    out.flags.writeable = False
    return out


def lindblad_generator(
    model: DampingModel, ops: CollectiveOperators
) -> Callable[[np.ndarray], np.ndarray]:
    """The map rho -> drho/dt for the damping model, as a closure.

    The dissipator is evaluated sitewise: with T_j = sum_i gamma_ij s_i^-,
    the sandwich term is sum_j T_j rho s_j^+, and the drift uses
    A = sum_ij gamma_ij s_j^+ s_i^-. The Lamb commutator i[B, rho] is added
    only when the delta matrix is nonzero.
    """
    if model.L != ops.L:
        raise DimensionMismatchError(f"model has L={model.L}, operators have L={ops.L}")
    L = model.L
    dim = 2**L
    stack = _lowering_stack(L)
    t_stack = np.einsum("ij,iab->jab", model.gamma, stack)
    sp_stack = stack.conj().transpose(0, 2, 1)
    a_op = coupling_operator(model.gamma, L)
    use_lamb = bool(np.any(model.delta != 0.0))
    b_op = coupling_operator(model.delta, L) if use_lamb else None

    def generator(rho: np.ndarray) -> np.ndarray:
        if rho.shape != (dim, dim):
            raise DimensionMismatchError(
                f"density matrix must be ({dim}, {dim}), got {rho.shape}"
            )
        sandwich = np.matmul(np.matmul(t_stack, rho), sp_stack).sum(axis=0)
        out = sandwich - 0.5 * (a_op @ rho + rho @ a_op)
        if use_lamb:
            out = out + 1j * (b_op @ rho - rho @ b_op)
        return out

    return generator


def _check_density(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(f"density matrix must be ({dim}, {dim}), got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise NonHermitianError("initial density matrix is not Hermitian")
    tr = float(rho.trace().real)
    if abs(tr - 1.0) > 1e-10:
        raise NotNormalizedError(f"initial trace {tr!r} is not 1")
    low = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if low < -1e-10:
        raise NotPSDError(f"initial density matrix has eigenvalue {low:.3e}")
    return rho


def _check_pure(psi: np.ndarray, dim: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (dim,):
        raise DimensionMismatchError(f"state must have {dim} amplitudes, got {psi.shape[0]}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-10:
        raise NotNormalizedError(f"state norm {norm!r} is not 1")
    return psi


def metrics_from_states(
    times: Sequence[float],
    rhos: Sequence[np.ndarray],
    L: int,
    psi_ref: np.ndarray | None = None,
    rho_ref: np.ndarray | None = None,
    trace_tol: float | None = None,
    store_states: bool = False,
) -> EvolutionResult:
    """Extract fidelity/trace/purity/excitation series from density matrices.

    Fidelity is <psi_ref|rho|psi_ref> against a pure reference, or
    tr(rho_ref rho) against a mixed one; with neither given it is measured
    against the first snapshot.
    """
    rhos = [np.asarray(r, dtype=complex) for r in rhos]
    number_op = excitation_operator(L)
    if psi_ref is not None:
        ref_vec = _check_pure(psi_ref, 2**L)
        fid = lambda r: float((ref_vec.conj() @ r @ ref_vec).real)
    else:
        ref_rho = np.asarray(rho_ref if rho_ref is not None else rhos[0], dtype=complex)
        fid = lambda r: float(np.trace(ref_rho @ r).real)

    fidelity, trace, purity, excitation = [], [], [], []
    for t, rho in zip(times, rhos):
        tr = float(rho.trace().real)
        if trace_tol is not None and abs(tr - 1.0) > trace_tol:
            raise TraceDriftError(f"|tr rho - 1| = {abs(tr - 1.0):.3e} at t = {t}")
        fidelity.append(fid(rho))
        trace.append(tr)
        purity.append(float(np.trace(rho @ rho).real))
        excitation.append(float(np.trace(number_op @ rho).real))
    return EvolutionResult(
        times=_frozen(np.asarray(times, dtype=float)),
        fidelity=_frozen(np.asarray(fidelity)),
        trace=_frozen(np.asarray(trace)),
        purity=_frozen(np.asarray(purity)),
        excitation=_frozen(np.asarray(excitation)),
        states=tuple(_frozen(r) for r in rhos) if store_states else None,
    )


def evolve_master(
    rho0: np.ndarray,
    model: DampingModel,
    t_grid: Sequence[float],
    dt: float,
    psi_ref: np.ndarray | None = None,
    store_states: bool = False,
) -> EvolutionResult:
    """RK4 integration of the master equation, observables at grid points.

    The trace is monitored at every grid point; drifting beyond 1e-6 aborts
    with TraceDrift (the step is too large for the rates involved).
    """
    dim = 2**model.L
    rho = _check_density(rho0, dim)
    generator = lindblad_generator(model, collective_operators(model.L))
    states = rk4_integrate(lambda _t, y: generator(y), rho, t_grid, dt)
    return metrics_from_states(
        [float(t) for t in t_grid],
        states,
        model.L,
        psi_ref=psi_ref,
        rho_ref=rho if psi_ref is None else None,
        trace_tol=1e-6,
        store_states=store_states,
    )


def jump_channels(model: DampingModel, ops: CollectiveOperators) -> JumpChannels:
    """Diagonalize gamma into jump operators, largest rate first.

    Eigenvalues inside the roundoff band are clamped to zero and dropped by
    the rate cutoff; eigenvector signs are fixed so the channels are
    reproducible. For a collective model the result is the single operator
    sqrt(gamma0) * S^-.
    """
    if model.L != ops.L:
        raise DimensionMismatchError(f"model has L={model.L}, operators have L={ops.L}")
    evals, evecs = np.linalg.eigh(model.gamma)
    if evals[0] < -1e-8 * model.gamma0 * model.L:
        raise NotPSDError(f"gamma has eigenvalue {evals[0]:.3e}")
    stack = _lowering_stack(model.L)
    operators = []
    rates = []
    for k in np.argsort(evals)[::-1]:
        rate = max(float(evals[k]), 0.0)
        if rate <= RATE_CUTOFF * model.gamma0:
            continue
        vec = evecs[:, k]
        lead = vec[np.argmax(np.abs(vec) > 1e-8)]
        if lead < 0.0:
            vec = -vec
        op = np.sqrt(rate) * np.einsum("i,iab->ab", vec, stack)
        operators.append(_frozen(op))
        rates.append(rate)
    return JumpChannels(L=model.L, operators=tuple(operators), rates=_frozen(np.asarray(rates)))


def drift_matrix(channels: JumpChannels, dt: float, lamb: np.ndarray | None = None) -> np.ndarray:
    """One-step no-jump propagator 1 - i dt H_eff.

    H_eff = -B - (i/2) sum_k J_k^+ J_k, where B is the Lamb coupling
    operator (zero when absent), so the matrix is
    1 + i dt B - (dt/2) sum_k J_k^+ J_k.
    """
    dim = 2**channels.L
    decay = np.zeros((dim, dim), dtype=complex)
    for op in channels.operators:
        decay += op.conj().T @ op
    out = np.eye(dim, dtype=complex) - 0.5 * dt * decay
    if lamb is not None:
        out = out + 1j * dt * np.asarray(lamb, dtype=complex)
    return out


def trajectory_stream(seed: int, index: int) -> np.random.Generator:
    """Independent RNG stream for one trajectory, keyed by (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence([seed & _SEED_MASK, index]))


def run_trajectory(
    psi0: np.ndarray,
    channels: JumpChannels,
    config: TrajectoryConfig,
    rng: np.random.Generator | None = None,
    lamb: np.ndarray | None = None,
    trajectory_index: int = 0,
) -> TrajectoryResult:
    """Propagate a single stochastic pure-state path.

    Each step draws one uniform u: a jump fires when u < dt * sum_k w_k with
    w_k = |J_k psi|^2, the channel picked by where u/dt lands in the running
    sum of weights; otherwise the renormalized drift step applies.
    """
    dim = 2**channels.L
    psi = _check_pure(psi0, dim)
    times, sample_steps, n_steps = sample_grid(config.t_max, config.dt, config.samples)
    if rng is None:
        rng = trajectory_stream(config.seed, trajectory_index)
    uniforms = rng.random(n_steps)
    step_matrix = drift_matrix(channels, config.dt, lamb)
    j_stack = np.stack(channels.operators) if channels.operators else np.zeros((0, dim, dim))
    n_channels = j_stack.shape[0]

    wanted = set(int(s) for s in sample_steps)
    states: list[np.ndarray] = []
    jumps: list[tuple[float, int]] = []
    if 0 in wanted:
        states.append(psi.copy())
    for step in range(n_steps):
        if n_channels:
            jpsi = j_stack @ psi
            weights = np.abs(jpsi) ** 2
            weights = weights.sum(axis=1)
            total = config.dt * float(weights.sum())
        else:
            total = 0.0
        if total > MAX_JUMP_PROBABILITY:
            raise StepTooLargeError(
                f"jump probability {total:.3f} exceeds {MAX_JUMP_PROBABILITY} at step {step}"
            )
        if uniforms[step] < total:
            k = int((np.cumsum(weights) < uniforms[step] / config.dt).sum())
            k = min(k, n_channels - 1)
            psi = jpsi[k] / np.linalg.norm(jpsi[k])
            jumps.append(((step + 1) * config.dt, k))
        else:
            psi = step_matrix @ psi
            psi = psi / np.linalg.norm(psi)
        if (step + 1) in wanted:
            states.append(psi.copy())
    return TrajectoryResult(
        times=_frozen(times),
        states=tuple(_frozen(s) for s in states),
        jumps=tuple(jumps),
    )


def ensemble_average(
    psi0: np.ndarray,
    channels: JumpChannels,
    config: TrajectoryConfig,
    lamb: np.ndarray | None = None,
) -> EnsembleResult:
    """Mean of |psi><psi| over n_traj stochastic paths, at the sample times.

    All trajectories step together as one (n_traj, dim) block; their uniform
    draws come from per-trajectory streams, so the result is identical to
    running the paths one at a time in any order.
    """
    dim = 2**channels.L
    psi = _check_pure(psi0, dim)
    times, sample_steps, n_steps = sample_grid(config.t_max, config.dt, config.samples)
    uniforms = np.empty((config.n_traj, n_steps))
    for i in range(config.n_traj):
        uniforms[i] = trajectory_stream(config.seed, i).random(n_steps)

    step_matrix = drift_matrix(channels, config.dt, lamb)
    j_stack = np.stack(channels.operators) if channels.operators else np.zeros((0, dim, dim))
    n_channels = j_stack.shape[0]

    states = np.tile(psi, (config.n_traj, 1))
    jump_counts = np.zeros(config.n_traj, dtype=int)
    rho_sum = np.zeros((len(sample_steps), dim, dim), dtype=complex)
    cursor = 0
    if sample_steps[cursor] == 0:
        rho_sum[cursor] = np.einsum("na,nb->ab", states, states.conj())
        cursor += 1
    for step in range(n_steps):
        if n_channels:
            jpsi = np.einsum("kab,nb->kna", j_stack, states)
            weights = (np.abs(jpsi) ** 2).sum(axis=2)
            probability = config.dt * weights.sum(axis=0)
        else:
            probability = np.zeros(config.n_traj)
        worst = float(probability.max()) if probability.size else 0.0
        if worst > MAX_JUMP_PROBABILITY:
            raise StepTooLargeError(
                f"jump probability {worst:.3f} exceeds {MAX_JUMP_PROBABILITY} at step {step}"
            )
        u = uniforms[:, step]
        jumping = u < probability

        advanced = states @ step_matrix.T
        advanced /= np.linalg.norm(advanced, axis=1)[:, None]
        if jumping.any():
            rows = np.nonzero(jumping)[0]
            cum = np.cumsum(weights[:, rows], axis=0)
            picked = (cum < (u[rows] / config.dt)[None, :]).sum(axis=0)
            picked = np.minimum(picked, n_channels - 1)
            collapsed = jpsi[picked, rows, :]
            collapsed /= np.linalg.norm(collapsed, axis=1)[:, None]
            advanced[rows] = collapsed
            jump_counts[rows] += 1
        states = advanced
        if cursor < len(sample_steps) and sample_steps[cursor] == step + 1:
            rho_sum[cursor] = np.einsum("na,nb->ab", states, states.conj())
            cursor += 1
    rhos = tuple(_frozen(r / config.n_traj) for r in rho_sum)
    return EnsembleResult(
        times=_frozen(times),
        rhos=rhos,
        jumps_per_trajectory=_frozen(jump_counts),
        n_traj=config.n_traj,
    )


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) tr|a - b| for Hermitian matrices."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def sample_grid(t_max: float, dt: float, samples: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Evenly spread sample points on the step lattice.

    Returns (times, step indices, total steps). dt must tile [0, t_max]
    exactly; sample times are multiples of dt so integrators can land on
    them without partial steps.
    """
    if not (dt > 0.0):
        raise InvalidStepError(f"dt must be positive, got {dt}")
    n_steps = int(round(t_max / dt))
    if n_steps < 1 or abs(n_steps * dt - t_max) > 1e-9 * max(1.0, t_max):
        raise InvalidStepError(f"dt = {dt} does not divide t_max = {t_max}")
    steps = np.unique(np.rint(np.linspace(0, n_steps, samples)).astype(int))
    return steps * dt, steps, n_steps


def write_timeseries_csv(target, result: EvolutionResult) -> None:
    """Write the observable series as CSV with 15 significant digits."""
    lines = [CSV_HEADER]
    for row in zip(result.times, result.fidelity, result.trace, result.purity, result.excitation):
        lines.append(",".join(f"{value:.15g}" for value in row))
    text = "\n".join(lines) + "\n"
    if isinstance(target, io.TextIOBase):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)
