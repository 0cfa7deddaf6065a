"""State-vector evaluation of circuits in all four semantics modes.

A state over n registers holds 2^n amplitudes in lexicographic basis order
with register 1 as the most significant index bit: basis tuple
(x1, ..., xn) sits at index sum(x_i * 2^(n-i)). Deterministic and
probabilistic states are float64 (entries are probabilities), quantum-real
states are float64 amplitudes, quantum-complex states are complex128.

Gate application transforms, for every setting of the non-target registers,
the 2^arity amplitudes indexed by the target registers (first listed target
most significant); it never materializes a 2^n x 2^n matrix. After every
gate the mode norm (l1 for probabilistic, l2 for quantum) is checked unless
the caller opts out.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .circuit import Circuit, GateApplication, Mode, admissible, validate

#: Register cap for simulation; override with the QCIR_MAX_QUBITS env var.
DEFAULT_MAX_REGISTERS = 24
#: Register cap for assembling a full circuit matrix.
FULL_MATRIX_MAX_REGISTERS = 12
#: Probabilistic entries in (-NEGATIVITY_CLAMP, 0) are rounding noise and get
#: clamped to 0 at observation time; anything below is an invariant failure.
NEGATIVITY_CLAMP = 1e-12
#: Allowed drift of the mode norm from 1 during a run.
NORM_TOL = 1e-9


class SimulationError(RuntimeError):
    """A state invariant (norm, simplex nonnegativity) failed during a run."""


def max_registers() -> int:
    """Current register cap (QCIR_MAX_QUBITS env var, default 24)."""
    return int(os.environ.get("QCIR_MAX_QUBITS", DEFAULT_MAX_REGISTERS))


@dataclass(frozen=True)
class StateVector:
    registers: int
    mode: Mode
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.amps.shape != (2 ** self.registers,):
            raise ValueError(
                f"state over {self.registers} registers needs {2 ** self.registers} amplitudes"
            )
        self.amps.setflags(write=False)


def pack_bits(bits: Iterable[int]) -> int:
    """Index of a basis tuple, first bit most significant."""
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def unpack_bits(index: int, width: int) -> tuple[int, ...]:
    """Basis tuple of an index, first bit most significant."""
    return tuple((index >> (width - 1 - i)) & 1 for i in range(width))


def bits_to_str(bits: Iterable[int]) -> str:
    return "".join(str(b) for b in bits)


def _state_dtype(mode: Mode):
    return np.complex128 if mode is Mode.QUANTUM_COMPLEX else np.float64


def _check_width(registers: int) -> None:
    cap = max_registers()
    if registers > cap:
        raise ValueError(
            f"{registers} registers exceeds the cap of {cap} "
            "(set QCIR_MAX_QUBITS to override)"
        )


def _check_circuit(circuit: Circuit) -> None:
    problems = validate(circuit)
    if problems:
        raise ValueError("invalid circuit: " + "; ".join(str(p) for p in problems))


def initial_state(circuit: Circuit, input_bits: Iterable[int] = ()) -> StateVector:
    """Basis state with the input in registers 1..k and ancilla inits after."""
    _check_width(circuit.registers)
    input_bits = tuple(int(b) for b in input_bits)
    if len(input_bits) != circuit.inputs:
        raise ValueError(f"expected {circuit.inputs} input bits, got {len(input_bits)}")
    if any(b not in (0, 1) for b in input_bits):
        raise ValueError(f"input bits must be 0 or 1, got {input_bits}")
    amps = np.zeros(2 ** circuit.registers, dtype=_state_dtype(circuit.mode))
    amps[pack_bits(input_bits + circuit.ancilla_init)] = 1.0
    return StateVector(circuit.registers, circuit.mode, amps)


def _apply_matrix(amps: np.ndarray, registers: int, matrix: np.ndarray,
                  axes: tuple[int, ...]) -> np.ndarray:
    """Apply a 2^a x 2^a matrix to the given register axes of amps.

    amps may carry trailing passenger dimensions (used when evolving all
    basis states at once); O(2^n * 2^a) work, never builds the full matrix.
    """
    a = len(axes)
    extra = amps.shape[1:]
    tensor = np.moveaxis(amps.reshape((2,) * registers + extra), axes, range(a))
    rest = tensor.shape[a:]
    out = matrix @ tensor.reshape(2 ** a, -1)
    out = np.moveaxis(out.reshape((2,) * a + rest), range(a), axes)
    return np.ascontiguousarray(out).reshape(amps.shape)


def _check_state_invariants(amps: np.ndarray, mode: Mode, context: str) -> None:
    if mode in (Mode.DETERMINISTIC, Mode.PROBABILISTIC):
        low = float(amps.min())
        if low < -NEGATIVITY_CLAMP:
            raise SimulationError(f"{context}: negative probability {low}")
        drift = abs(float(np.abs(amps).sum()) - 1.0)
        if drift > NORM_TOL:
            raise SimulationError(f"{context}: l1 norm drifted by {drift}")
    else:
        drift = abs(float(np.linalg.norm(amps)) - 1.0)
        if drift > NORM_TOL:
            raise SimulationError(f"{context}: l2 norm drifted by {drift}")


def apply_gate(state: StateVector, ga: GateApplication, check: bool = True) -> StateVector:
    """One gate application; returns a new state."""
    if len(ga.targets) != ga.gate.arity:
        raise ValueError(f"gate {ga.gate.name} arity {ga.gate.arity} != {len(ga.targets)} targets")
    if len(set(ga.targets)) != len(ga.targets):
        raise ValueError(f"duplicate register in targets {ga.targets}")
    if not all(1 <= t <= state.registers for t in ga.targets):
        raise ValueError(f"targets {ga.targets} out of range 1..{state.registers}")
    if not admissible(ga.gate, state.mode):
        raise ValueError(f"gate {ga.gate.name} is not admissible in {state.mode} mode")
    axes = tuple(t - 1 for t in ga.targets)
    amps = _apply_matrix(state.amps, state.registers, ga.gate.matrix, axes)
    if check:
        _check_state_invariants(amps, state.mode, f"after {ga}")
    return StateVector(state.registers, state.mode, amps)


def run(
    circuit: Circuit,
    input_bits: Iterable[int] = (),
    check: bool = True,
    on_state: Callable[[int, StateVector], None] | None = None,
) -> StateVector:
    """Fold the gate list over the initial state.

    on_state, when given, is called with (step, state) for step 0 (initial
    state) and after every gate.
    """
    _check_circuit(circuit)
    state = initial_state(circuit, input_bits)
    if on_state is not None:
        on_state(0, state)
    for i, ga in enumerate(circuit.gates, start=1):
        state = apply_gate(state, ga, check=check)
        if on_state is not None:
            on_state(i, state)
    return state


def observation_weights(state: StateVector) -> np.ndarray:
    """Probability of each basis state: raw coefficients in deterministic and
    probabilistic modes, squared moduli in the quantum modes."""
    if state.mode in (Mode.DETERMINISTIC, Mode.PROBABILISTIC):
        weights = np.array(state.amps)
        tiny = (weights < 0.0) & (weights > -NEGATIVITY_CLAMP)
        weights[tiny] = 0.0
        if weights.min() < 0.0:
            raise SimulationError(f"negative probability {weights.min()} at observation")
        return weights
    return np.abs(state.amps) ** 2


def observe_outputs(state: StateVector, num_outputs: int) -> dict[tuple[int, ...], float]:
    """Distribution over the first num_outputs registers, marginalizing the rest.

    Returns only the outcomes with nonzero probability.
    """
    if not 0 < num_outputs <= state.registers:
        raise ValueError(f"output count {num_outputs} out of range 1..{state.registers}")
    weights = observation_weights(state).reshape((2,) * state.registers)
    drop = tuple(range(num_outputs, state.registers))
    if drop:
        weights = weights.sum(axis=drop)
    flat = weights.reshape(-1)
    return {
        unpack_bits(i, num_outputs): float(p) for i, p in enumerate(flat) if p > 0.0
    }


def run_deterministic(circuit: Circuit, input_bits: Iterable[int] = ()) -> tuple[int, ...]:
    """Fast path for Boolean circuits: track one basis tuple, O(gates) time."""
    input_bits = tuple(int(b) for b in input_bits)
    if len(input_bits) != circuit.inputs:
        raise ValueError(f"expected {circuit.inputs} input bits, got {len(input_bits)}")
    bits = list(input_bits + circuit.ancilla_init)
    for ga in circuit.gates:
        if not ga.gate.flags.boolean:
            raise ValueError(f"gate {ga.gate.name} is not Boolean")
        if not all(1 <= t <= circuit.registers for t in ga.targets):
            raise ValueError(f"targets {ga.targets} out of range")
        if len(set(ga.targets)) != len(ga.targets):
            raise ValueError(f"duplicate register in targets {ga.targets}")
        column = pack_bits(bits[t - 1] for t in ga.targets)
        row = int(np.argmax(ga.gate.matrix.real[:, column]))
        for j, t in enumerate(ga.targets):
            bits[t - 1] = (row >> (ga.gate.arity - 1 - j)) & 1
    return tuple(bits)


def sample(state: StateVector, seed: int) -> tuple[int, ...]:
    """Draw one basis state with the mode-appropriate probability."""
    weights = observation_weights(state)
    total = float(weights.sum())
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (total probability {total})")
    rng = np.random.default_rng(seed)
    index = int(rng.choice(len(weights), p=weights / total))
    return unpack_bits(index, state.registers)


def full_matrix(circuit: Circuit) -> np.ndarray:
    """The 2^n x 2^n linear map of the whole gate list.

    Debug-scale only: every basis state is pushed through the circuit at
    once, so the width is capped at FULL_MATRIX_MAX_REGISTERS.
    """
    if circuit.registers > FULL_MATRIX_MAX_REGISTERS:
        raise ValueError(
            f"full_matrix supports at most {FULL_MATRIX_MAX_REGISTERS} registers, "
            f"got {circuit.registers}"
        )
    _check_circuit(circuit)
    matrix = np.eye(2 ** circuit.registers, dtype=_state_dtype(circuit.mode))
    for ga in circuit.gates:
        axes = tuple(t - 1 for t in ga.targets)
        matrix = _apply_matrix(matrix, circuit.registers, ga.gate.matrix, axes)
    return matrix
