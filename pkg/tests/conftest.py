"""Shared fixtures: example circuits and random circuit generators."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

import qcir
from qcir import Circuit, GateApplication, Mode, builtin, coin_flip

FIXTURE_DIR = Path(__file__).parent / "fixtures"
MALFORMED_DIR = FIXTURE_DIR / "malformed"


def fixture_source(name: str) -> str:
    return (FIXTURE_DIR / name).read_text(encoding="utf-8")


def load_fixture(name: str) -> Circuit:
    return qcir.parse(fixture_source(name))


def fixture_names() -> list[str]:
    return sorted(p.name for p in FIXTURE_DIR.glob("*.qcir"))


@pytest.fixture
def maj3() -> Circuit:
    return load_fixture("maj3.qcir")


@pytest.fixture
def sec3() -> Circuit:
    return load_fixture("sec3.qcir")


# ---------------------------------------------------------------------------
# random circuit generators (seeded numpy, used by oracle comparisons)
# ---------------------------------------------------------------------------

_BOOLEAN_GATES = ("NOT", "IDENT", "AND", "OR", "XOR", "CNOT", "TOFFOLI")
_REVERSIBLE_GATES = ("NOT", "IDENT", "CNOT", "TOFFOLI")


def _random_application(rng: np.random.Generator, gate, registers: int) -> GateApplication:
    targets = rng.choice(registers, size=gate.arity, replace=False) + 1
    return GateApplication(gate, tuple(int(t) for t in targets))


def random_boolean_circuit(
    rng: np.random.Generator,
    registers: int,
    num_gates: int,
    names: tuple[str, ...] = _BOOLEAN_GATES,
) -> Circuit:
    """Deterministic circuit of random Boolean gates, all registers inputs."""
    gates = []
    for _ in range(num_gates):
        gate = builtin(names[rng.integers(len(names))])
        if gate.arity > registers:
            continue
        gates.append(_random_application(rng, gate, registers))
    return Circuit(
        name="random_bool",
        registers=registers,
        mode=Mode.DETERMINISTIC,
        inputs=registers,
        outputs=registers,
        gates=tuple(gates),
    )


def random_probabilistic_circuit(
    rng: np.random.Generator,
    registers: int,
    num_gates: int,
    num_flips: int,
    bias: float | None = 0.5,
) -> Circuit:
    """Boolean gates plus num_flips coin flips with p == q (default fair)."""
    base = random_boolean_circuit(rng, registers, num_gates)
    gates = list(base.gates)
    for _ in range(num_flips):
        p = float(rng.uniform()) if bias is None else bias
        position = int(rng.integers(len(gates) + 1))
        target = int(rng.integers(registers)) + 1
        gates.insert(position, GateApplication(coin_flip(p, p), (target,)))
    return Circuit(
        name="random_prob",
        registers=registers,
        mode=Mode.PROBABILISTIC,
        inputs=registers,
        outputs=registers,
        gates=tuple(gates),
    )


def random_quantum_circuit(
    rng: np.random.Generator,
    registers: int,
    num_gates: int,
    names: tuple[str, ...],
    mode: Mode = Mode.QUANTUM_REAL,
) -> Circuit:
    gates = []
    for _ in range(num_gates):
        gate = builtin(names[rng.integers(len(names))])
        if gate.arity > registers:
            continue
        gates.append(_random_application(rng, gate, registers))
    return Circuit(
        name="random_quantum",
        registers=registers,
        mode=mode,
        inputs=registers,
        outputs=registers,
        gates=tuple(gates),
    )


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
