"""Quantum error avoiding codes for collective amplitude damping.

Core layers: su(2) block counting (rep_theory), dark-state bases and
codewords (dark_codes), the two-qubit encoder circuit (circuits),
geometry-derived damping models (noise_field), and master-equation plus
quantum-trajectory dynamics (dynamics). An HTTP service and a CLI sit on
top in qeac.service and qeac.cli.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .circuits import GateOp, decode_two_bit, encode_two_bit, gate_matrix
from .dark_codes import (
    CodeLabel,
    CodeSpec,
    DarkBasis,
    compute_dark_basis,
    computed_codewords,
    dark_residual,
    logical_encode,
    reference_codewords,
    span_distance,
    subspace_equal,
)
from .dynamics import (
    EnsembleResult,
    EvolutionResult,
    JumpChannels,
    TrajectoryConfig,
    TrajectoryResult,
    ensemble_average,
    evolve_master,
    jump_channels,
    lindblad_generator,
    run_trajectory,
    trace_distance,
)
from .errors import QeacError
from .noise_field import (
    DampingModel,
    Geometry,
    collective_model,
    collectivity_ratio,
    correlated_model,
    custom_model,
    delta_matrix,
    gamma_matrix,
    independent_model,
)
from .rep_theory import (
    IrrepTable,
    catalan_multiplicity,
    dark_count,
    efficiency,
    efficiency_asymptote,
    irrep_multiplicities,
)
from .spin_ops import CollectiveOperators, collective_operators, site_operator

__all__ = [
    "__version__",
    "QeacError",
    "GateOp",
    "gate_matrix",
    "encode_two_bit",
    "decode_two_bit",
    "CodeLabel",
    "CodeSpec",
    "DarkBasis",
    "compute_dark_basis",
    "computed_codewords",
    "reference_codewords",
    "dark_residual",
    "span_distance",
    "subspace_equal",
    "logical_encode",
    "EnsembleResult",
    "EvolutionResult",
    "JumpChannels",
    "TrajectoryConfig",
    "TrajectoryResult",
    "ensemble_average",
    "evolve_master",
    "jump_channels",
    "lindblad_generator",
    "run_trajectory",
    "trace_distance",
    "DampingModel",
    "Geometry",
    "collective_model",
    "collectivity_ratio",
    "correlated_model",
    "custom_model",
    "delta_matrix",
    "gamma_matrix",
    "independent_model",
    "IrrepTable",
    "catalan_multiplicity",
    "dark_count",
    "efficiency",
    "efficiency_asymptote",
    "irrep_multiplicities",
    "CollectiveOperators",
    "collective_operators",
    "site_operator",
]
