"""Circuit data model: registers, input/output designation, ancilla initial
values, and the chronologically ordered gate list.

Registers are 1-indexed. The first `inputs` registers take the circuit input,
the first `outputs` registers are observed at the end, and every noninput
register carries a fixed initial bit (default 0). Circuits are immutable;
append/concat return new values.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .gates import GateSpec


class Mode(enum.Enum):
    """Which gate classes a circuit admits and how its state is read out."""
    DETERMINISTIC = "deterministic"
    PROBABILISTIC = "probabilistic"
    QUANTUM_REAL = "quantum-real"
    QUANTUM_COMPLEX = "quantum-complex"

    def __str__(self) -> str:
        return self.value


def admissible(gate: GateSpec, mode: Mode) -> bool:
    """Whether a gate's class allows it under the given semantics."""
    if mode is Mode.DETERMINISTIC:
        return gate.flags.boolean
    if mode is Mode.PROBABILISTIC:
        return gate.flags.stochastic
    if mode is Mode.QUANTUM_REAL:
        return gate.flags.orthogonal
    return gate.flags.unitary


def _required_class(mode: Mode) -> str:
    return {
        Mode.DETERMINISTIC: "boolean",
        Mode.PROBABILISTIC: "stochastic",
        Mode.QUANTUM_REAL: "orthogonal",
        Mode.QUANTUM_COMPLEX: "unitary",
    }[mode]


@dataclass(frozen=True)
class GateApplication:
    """One gate applied to an ordered tuple of distinct register indices."""
    gate: GateSpec
    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))

    def __str__(self) -> str:
        return f"{self.gate.name} {' '.join(f'r{t}' for t in self.targets)}"


@dataclass(frozen=True)
class Violation:
    """One admissibility problem found by validate()."""
    gate_index: int | None  # 0-based position in the gate list, None = header
    message: str

    def __str__(self) -> str:
        where = "header" if self.gate_index is None else f"gate {self.gate_index + 1}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class Circuit:
    """An immutable circuit over `registers` registers.

    ancilla_init lists the initial bits of registers inputs+1 .. registers.
    """
    name: str
    registers: int
    mode: Mode
    inputs: int = 0
    outputs: int = 0
    ancilla_init: tuple[int, ...] = ()
    gates: tuple[GateApplication, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "ancilla_init", tuple(int(b) for b in self.ancilla_init))
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.registers < 1:
            raise ValueError("a circuit needs at least one register")
        if not 0 <= self.inputs <= self.registers:
            raise ValueError(f"inputs={self.inputs} out of range for {self.registers} registers")
        if not 0 <= self.outputs <= self.registers:
            raise ValueError(f"outputs={self.outputs} out of range for {self.registers} registers")
        if len(self.ancilla_init) != self.registers - self.inputs:
            raise ValueError(
                f"ancilla_init needs {self.registers - self.inputs} entries, "
                f"got {len(self.ancilla_init)}"
            )
        if any(b not in (0, 1) for b in self.ancilla_init):
            raise ValueError("ancilla initial values must be 0 or 1")

    def init_value(self, register: int) -> int:
        """Initial bit of a noninput register."""
        if not self.inputs < register <= self.registers:
            raise ValueError(f"r{register} is not a noninput register")
        return self.ancilla_init[register - self.inputs - 1]

    def gate_violations(self, ga: GateApplication) -> list[str]:
        problems = []
        if len(ga.targets) != ga.gate.arity:
            problems.append(
                f"gate {ga.gate.name} has arity {ga.gate.arity} but {len(ga.targets)} targets"
            )
        for t in ga.targets:
            if not 1 <= t <= self.registers:
                problems.append(f"register r{t} out of range 1..{self.registers}")
        if len(set(ga.targets)) != len(ga.targets):
            problems.append(f"duplicate register in targets {ga.targets}")
        if not admissible(ga.gate, self.mode):
            problems.append(
                f"gate {ga.gate.name} is not {_required_class(self.mode)}; "
                f"not admissible in {self.mode} mode"
            )
        return problems

    def __str__(self) -> str:
        return f"circuit {self.name} ({self.mode}, {self.registers} registers, {len(self.gates)} gates)"


def validate(circuit: Circuit) -> list[Violation]:
    """All gate-level admissibility violations; empty list means valid."""
    report = []
    for i, ga in enumerate(circuit.gates):
        report.extend(Violation(i, msg) for msg in circuit.gate_violations(ga))
    return report


def append(circuit: Circuit, ga: GateApplication) -> Circuit:
    """New circuit with one more gate at the end."""
    problems = circuit.gate_violations(ga)
    if problems:
        raise ValueError("; ".join(problems))
    return replace(circuit, gates=circuit.gates + (ga,))


def concat(first: Circuit, second: Circuit) -> Circuit:
    """Concatenate gate lists; metadata (inputs, outputs, inits) comes from `first`.

    The second circuit must have the same width and only gates admissible
    under the first circuit's mode.
    """
    if first.registers != second.registers:
        raise ValueError(
            f"width mismatch: {first.registers} vs {second.registers} registers"
        )
    merged = replace(first, gates=first.gates + second.gates)
    problems = validate(merged)
    if problems:
        raise ValueError("; ".join(str(p) for p in problems))
    return merged


def with_mode(circuit: Circuit, mode: Mode) -> Circuit:
    """Reinterpret a circuit under different semantics, if its gates allow it."""
    lifted = replace(circuit, mode=mode)
    problems = validate(lifted)
    if problems:
        raise ValueError("; ".join(str(p) for p in problems))
    return lifted


def add_registers(circuit: Circuit, extra: int, init: tuple[int, ...] = ()) -> Circuit:
    """Widen a circuit by appending noninput registers (default init 0)."""
    if extra < 0:
        raise ValueError("cannot remove registers")
    init = tuple(init) if init else (0,) * extra
    if len(init) != extra:
        raise ValueError(f"need {extra} initial values, got {len(init)}")
    return replace(
        circuit,
        registers=circuit.registers + extra,
        ancilla_init=circuit.ancilla_init + init,
    )


_STRAIGHT_LINE_OPS = {"AND": "AND", "OR": "OR", "XOR": "XOR", "CNOT": "XOR"}


def to_straight_line(circuit: Circuit) -> str:
    """Render a deterministic circuit as assignment instructions.

    One line per gate: ``r<t> := r<t> <OP> r<c>`` for dyadic Boolean gates
    (CNOT prints as XOR) and ``r<t> := NOT r<t>`` for NOT. Other gates,
    including TOFFOLI and IDENT, have no assignment form and are rejected.
    """
    if circuit.mode is not Mode.DETERMINISTIC:
        raise ValueError("straight-line form exists only for deterministic circuits")
    lines = []
    for ga in circuit.gates:
        if not ga.gate.flags.boolean:
            raise ValueError(f"gate {ga.gate.name} is not Boolean")
        if ga.gate.name == "NOT":
            lines.append(f"r{ga.targets[0]} := NOT r{ga.targets[0]}")
        elif ga.gate.name in _STRAIGHT_LINE_OPS:
            control, target = ga.targets
            lines.append(f"r{target} := r{target} {_STRAIGHT_LINE_OPS[ga.gate.name]} r{control}")
        else:
            raise ValueError(f"gate {ga.gate.name} has no straight-line assignment form")
    return "\n".join(lines)


def structurally_equal(a: Circuit, b: Circuit, tol: float = 1e-12) -> bool:
    """Field-by-field equality, comparing gate matrices entrywise within tol."""
    if (
        a.name != b.name
        or a.registers != b.registers
        or a.mode != b.mode
        or a.inputs != b.inputs
        or a.outputs != b.outputs
        or a.ancilla_init != b.ancilla_init
        or len(a.gates) != len(b.gates)
    ):
        return False
    for ga, gb in zip(a.gates, b.gates):
        if ga.targets != gb.targets or ga.gate.name != gb.gate.name:
            return False
        if ga.gate.matrix.shape != gb.gate.matrix.shape:
            return False
        if np.abs(ga.gate.matrix - gb.gate.matrix).max(initial=0.0) > tol:
            return False
    return True
