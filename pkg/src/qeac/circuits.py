"""Gate-level encoding and decoding of the two-qubit code.

The encoder needs only two gates on (data, ancilla): a controlled-Hadamard
followed by a controlled-NOT. The Hadamard convention here is the one the
code construction requires, not the textbook one: with the control excited,
|1> -> (|1> + |0>)/sqrt(2) and |0> -> (|1> - |0>)/sqrt(2). That single-qubit
map is involutory, so running the two gates in reverse order decodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from .errors import InvalidSitesError, NotNormalizedError

__all__ = [
    "GateOp",
    "gate_matrix",
    "encode_two_bit",
    "decode_two_bit",
    "two_bit_encode_unitary",
    "two_bit_decode_unitary",
]

GATE_KINDS = ("cnot", "chadamard")

_INV_SQRT2 = sqrt(0.5)


@dataclass(frozen=True)
class GateOp:
    """A two-site controlled gate on an L-qubit register (sites are 1-based)."""

    kind: str
    control: int
    target: int
    L: int

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"kind must be one of {GATE_KINDS}, got {self.kind!r}")
        if not (1 <= self.control <= self.L and 1 <= self.target <= self.L):
            raise InvalidSitesError(
                f"control={self.control}, target={self.target} outside 1..{self.L}"
            )
        if self.control == self.target:
            raise InvalidSitesError(f"control and target coincide at {self.control}")


def gate_matrix(g: GateOp) -> np.ndarray:
    """Dense unitary of the gate on the full register.

    Built column by column: basis kets with the control in |0> pass through;
    with the control in |1> the target is flipped (cnot) or sent through the
    Hadamard variant above (chadamard).
    """
    dim = 2**g.L
    control_bit = g.L - g.control
    target_bit = g.L - g.target
    out = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        if (b >> control_bit) & 1 == 0:
            out[b, b] = 1.0
            continue
        flipped = b ^ (1 << target_bit)
        if g.kind == "cnot":
            out[flipped, b] = 1.0
        elif (b >> target_bit) & 1:
            # target |1> -> (|1> + |0>)/sqrt(2)
            out[b, b] = _INV_SQRT2
            out[flipped, b] = _INV_SQRT2
        else:
            # target |0> -> (|1> - |0>)/sqrt(2)
            out[b, b] = -_INV_SQRT2
            out[flipped, b] = _INV_SQRT2
    return out


@lru_cache(maxsize=None)
def two_bit_encode_unitary() -> np.ndarray:
    """Encoding unitary on (data, ancilla): controlled-Hadamard 1->2, then cnot 2->1."""
    chad = gate_matrix(GateOp("chadamard", control=1, target=2, L=2))
    cnot = gate_matrix(GateOp("cnot", control=2, target=1, L=2))
    u = cnot @ chad
    u.flags.writeable = False
    return u


@lru_cache(maxsize=None)
def two_bit_decode_unitary() -> np.ndarray:
    """The same two gates in reverse order; inverts the encoder exactly."""
    chad = gate_matrix(GateOp("chadamard", control=1, target=2, L=2))
    cnot = gate_matrix(GateOp("cnot", control=2, target=1, L=2))
    u = chad @ cnot
    u.flags.writeable = False
    return u


def encode_two_bit(c0: complex, c1: complex) -> np.ndarray:
    """Encode one logical qubit: c0|00> + (c1/sqrt(2))(|01> - |10>).

    The result comes from applying the actual gate sequence to
    (c0|0> + c1|1>) on the data qubit with the ancilla in |0>.
    """
    norm_sq = abs(c0) ** 2 + abs(c1) ** 2
    if abs(norm_sq - 1.0) > 1e-12:
        raise NotNormalizedError(f"|c0|^2 + |c1|^2 = {norm_sq!r} is not 1")
    state = np.zeros(4, dtype=complex)
    state[0] = c0
    state[2] = c1
    return two_bit_encode_unitary() @ state


def decode_two_bit(state: np.ndarray) -> tuple[complex, complex, float]:
    """Invert the encoder; returns (c0, c1, ancilla_residual).

    ancilla_residual is the probability weight left on ancilla-|1> basis
    states after decoding; it is zero exactly when the input lay in the
    code space.
    """
    vec = np.asarray(state, dtype=complex).ravel()
    if vec.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got {vec.shape[0]}")
    out = two_bit_decode_unitary() @ vec
    residual = float(abs(out[1]) ** 2 + abs(out[3]) ** 2)
    return complex(out[0]), complex(out[2]), residual
