"""Simulator tests: kernels, observation, oracles, sampling, invariants."""
import itertools

import numpy as np
import pytest

import qcir
from qcir import (
    Circuit,
    GateApplication,
    Mode,
    SimulationError,
    StateVector,
    apply_gate,
    builtin,
    coin_flip,
    custom,
    full_matrix,
    initial_state,
    observe_outputs,
    run,
    run_deterministic,
    sample,
)
from qcir.simulate import pack_bits, unpack_bits

from conftest import (
    load_fixture,
    random_boolean_circuit,
    random_probabilistic_circuit,
    random_quantum_circuit,
)

SQ2 = 1 / np.sqrt(2)


# ---------------------------------------------------------------------------
# independent oracle: pure-Python bit interpreter + branch enumeration
# ---------------------------------------------------------------------------

_BIT_SEMANTICS = {
    "NOT": lambda b: (1 - b[0],),
    "IDENT": lambda b: b,
    "AND": lambda b: (b[0], b[0] & b[1]),
    "OR": lambda b: (b[0], b[0] | b[1]),
    "XOR": lambda b: (b[0], b[0] ^ b[1]),
    "CNOT": lambda b: (b[0], b[0] ^ b[1]),
    "TOFFOLI": lambda b: (b[0], b[1], b[2] ^ (b[0] & b[1])),
}


def interpret_bits(circuit, input_bits, flip_outcomes=()):
    """Evaluate a circuit on bits directly, consuming fixed flip outcomes."""
    bits = list(tuple(input_bits) + circuit.ancilla_init)
    outcomes = iter(flip_outcomes)
    weight = 1.0
    for ga in circuit.gates:
        if ga.gate.name == "FLIP":
            p = float(ga.gate.matrix[0, 0])
            q = float(ga.gate.matrix[0, 1])
            assert p == q, "branch enumeration needs input-independent flips"
            out = next(outcomes)
            weight *= p if out == 0 else 1.0 - p
            bits[ga.targets[0] - 1] = out
        else:
            values = tuple(bits[t - 1] for t in ga.targets)
            for target, value in zip(ga.targets, _BIT_SEMANTICS[ga.gate.name](values)):
                bits[target - 1] = value
    return tuple(bits), weight


def enumerate_branches(circuit, input_bits, num_outputs):
    """Exhaustive distribution over outputs by branching every coin flip."""
    num_flips = sum(1 for ga in circuit.gates if ga.gate.name == "FLIP")
    acc: dict[tuple[int, ...], float] = {}
    for outcomes in itertools.product((0, 1), repeat=num_flips):
        bits, weight = interpret_bits(circuit, input_bits, outcomes)
        if weight == 0.0:
            continue
        key = bits[:num_outputs]
        acc[key] = acc.get(key, 0.0) + weight
    return acc


# ---------------------------------------------------------------------------
# initial states
# ---------------------------------------------------------------------------

def test_initial_state_places_input_and_ancillas():
    c = load_fixture("sec3.qcir")
    s = initial_state(c, (1, 0, 1))
    assert s.amps[pack_bits((1, 0, 1))] == 1.0
    assert s.amps.sum() == 1.0


def test_initial_state_of_zero_input_circuit():
    c = load_fixture("cnot_from_toffoli.qcir")
    s = initial_state(c, (0, 0))
    assert s.amps[pack_bits((0, 0, 1))] == 1.0


def test_initial_state_rejects_bad_input():
    c = load_fixture("sec3.qcir")
    with pytest.raises(ValueError, match="expected 3 input bits"):
        initial_state(c, (1, 0))
    with pytest.raises(ValueError, match="0 or 1"):
        initial_state(c, (1, 0, 2))


def test_pack_unpack_round_trip():
    for i in range(32):
        assert pack_bits(unpack_bits(i, 5)) == i


# ---------------------------------------------------------------------------
# single gate applications
# ---------------------------------------------------------------------------

def test_hadamard_creates_equal_superposition():
    c = Circuit(name="h", registers=1, mode=Mode.QUANTUM_REAL, inputs=1)
    s = apply_gate(initial_state(c, (0,)), GateApplication(builtin("H"), (1,)))
    assert np.abs(s.amps - np.array([SQ2, SQ2])).max() < 1e-15


def test_coin_flip_densities():
    c = Circuit(name="f", registers=1, mode=Mode.PROBABILISTIC, inputs=1)
    s = apply_gate(initial_state(c, (0,)), GateApplication(coin_flip(5 / 8, 1 / 4), (1,)))
    assert tuple(s.amps) == (0.625, 0.375)


def test_toffoli_flips_target_when_controls_set():
    c = Circuit(name="t", registers=3, mode=Mode.DETERMINISTIC, inputs=3)
    s = apply_gate(initial_state(c, (1, 1, 0)), GateApplication(builtin("TOFFOLI"), (1, 2, 3)))
    assert s.amps[pack_bits((1, 1, 1))] == 1.0


def test_apply_gate_respects_target_order():
    # CNOT with (control, target) = (2, 1) must differ from (1, 2)
    c = Circuit(name="t", registers=2, mode=Mode.DETERMINISTIC, inputs=2)
    s = initial_state(c, (0, 1))
    forward = apply_gate(s, GateApplication(builtin("CNOT"), (1, 2)))
    backward = apply_gate(s, GateApplication(builtin("CNOT"), (2, 1)))
    assert forward.amps[pack_bits((0, 1))] == 1.0
    assert backward.amps[pack_bits((1, 1))] == 1.0


def test_apply_gate_validates_application():
    c = Circuit(name="t", registers=2, mode=Mode.QUANTUM_REAL, inputs=2)
    s = initial_state(c, (0, 0))
    with pytest.raises(ValueError, match="duplicate"):
        apply_gate(s, GateApplication(builtin("CNOT"), (1, 1)))
    with pytest.raises(ValueError, match="out of range"):
        apply_gate(s, GateApplication(builtin("H"), (3,)))
    with pytest.raises(ValueError, match="not admissible"):
        apply_gate(s, GateApplication(builtin("AND"), (1, 2)))


def test_apply_gate_detects_norm_drift():
    amps = np.array([2.0, 0.0])
    s = StateVector(1, Mode.QUANTUM_REAL, amps)
    with pytest.raises(SimulationError, match="l2 norm drifted"):
        apply_gate(s, GateApplication(builtin("H"), (1,)))


# ---------------------------------------------------------------------------
# whole-circuit runs
# ---------------------------------------------------------------------------

def test_run_three_register_circuit():
    c = load_fixture("sec3.qcir")
    s = run(c, (1, 0, 1))
    assert s.amps[pack_bits((0, 1, 1))] == 1.0


def test_run_hzh_acts_as_not():
    c = load_fixture("hzh.qcir")
    assert np.abs(run(c, (0,)).amps - [0.0, 1.0]).max() < 1e-12
    assert np.abs(run(c, (1,)).amps - [1.0, 0.0]).max() < 1e-12


def test_state_after_cnot_between_hadamard_layers():
    # (H x H)|00> passes through CNOT unchanged: all four amplitudes 1/2
    c = load_fixture("hh_cnot_hh.qcir")
    states = []
    run(c, (0, 0), on_state=lambda step, s: states.append(s))
    after_cnot = states[3]
    assert np.abs(after_cnot.amps - np.full(4, 0.5)).max() < 1e-12


def test_run_checks_invariants_along_the_way():
    lossy = custom("lossy", 1, np.array([[0.5, 0.0], [0.0, 0.5]]))
    c = Circuit(
        name="t", registers=1, mode=Mode.PROBABILISTIC, inputs=1,
        gates=(GateApplication(lossy, (1,)),),
    )
    # custom gate is not stochastic, so validation rejects it up front
    with pytest.raises(ValueError, match="invalid circuit"):
        run(c, (0,))


# ---------------------------------------------------------------------------
# observation
# ---------------------------------------------------------------------------

def test_observe_hadamard_output():
    c = Circuit(name="h", registers=1, mode=Mode.QUANTUM_REAL, inputs=1, outputs=1,
                gates=(GateApplication(builtin("H"), (1,)),))
    dist = observe_outputs(run(c, (0,)), 1)
    assert abs(dist[(0,)] - 0.5) < 1e-12
    assert abs(dist[(1,)] - 0.5) < 1e-12


def test_observe_majority_is_exactly_half(maj3):
    dist = observe_outputs(run(maj3), 1)
    assert dist[(1,)] == 0.5
    assert dist[(0,)] == 0.5


def test_observe_basis_state_prefix():
    c = Circuit(name="t", registers=3, mode=Mode.DETERMINISTIC, inputs=3)
    dist = observe_outputs(run(c, (0, 1, 1)), 2)
    assert dist == {(0, 1): 1.0}


def test_observe_rejects_bad_output_count():
    c = Circuit(name="t", registers=2, mode=Mode.DETERMINISTIC, inputs=2)
    s = run(c, (0, 0))
    with pytest.raises(ValueError, match="output count"):
        observe_outputs(s, 0)
    with pytest.raises(ValueError, match="output count"):
        observe_outputs(s, 3)


def test_observation_probabilities_sum_to_one_in_quantum_mode():
    rng = np.random.default_rng(21)
    c = random_quantum_circuit(rng, 3, 25, ("H", "Z", "CNOT", "T"))
    dist = observe_outputs(run(c, (0, 1, 0)), 3)
    assert abs(sum(dist.values()) - 1.0) < 1e-9


# ---------------------------------------------------------------------------
# deterministic fast path
# ---------------------------------------------------------------------------

def test_copy_circuit_duplicates_its_input():
    c = load_fixture("copy.qcir")
    assert run_deterministic(c, (1,)) == (1, 1)
    assert run_deterministic(c, (0,)) == (0, 0)


def test_run_deterministic_three_register_example(sec3):
    assert run_deterministic(sec3, (1, 1, 0)) == (0, 1, 0)


def test_run_deterministic_empty_circuit():
    c = Circuit(name="t", registers=2, mode=Mode.DETERMINISTIC, inputs=2)
    assert run_deterministic(c, (1, 0)) == (1, 0)


def test_run_deterministic_rejects_nonboolean_gates():
    c = load_fixture("hzh.qcir")
    with pytest.raises(ValueError, match="not Boolean"):
        run_deterministic(c, (0,))


def test_deterministic_path_agrees_with_state_vector_path():
    rng = np.random.default_rng(22)
    for _ in range(30):
        registers = int(rng.integers(1, 7))
        c = random_boolean_circuit(rng, registers, int(rng.integers(0, 40)))
        input_bits = tuple(int(b) for b in rng.integers(0, 2, size=registers))
        fast = run_deterministic(c, input_bits)
        dist = observe_outputs(run(c, input_bits), registers)
        assert dist == {fast: 1.0}


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sample_of_basis_state_is_that_state():
    c = Circuit(name="t", registers=2, mode=Mode.DETERMINISTIC, inputs=2)
    s = run(c, (1, 0))
    for seed in (0, 1, 99):
        assert sample(s, seed) == (1, 0)


def test_sample_is_deterministic_per_seed():
    c = load_fixture("hzh.qcir")
    s = run(c, (0,))
    assert sample(s, 123) == sample(s, 123)


def test_sample_frequency_matches_hadamard_distribution():
    c = Circuit(name="h", registers=1, mode=Mode.QUANTUM_REAL, inputs=1,
                gates=(GateApplication(builtin("H"), (1,)),))
    s = run(c, (0,))
    draws = 100_000
    ones = sum(sample(s, seed)[0] for seed in range(draws))
    assert abs(ones / draws - 0.5) < 0.01


def test_sample_rejects_unnormalized_state():
    s = StateVector(1, Mode.PROBABILISTIC, np.array([0.4, 0.4]))
    with pytest.raises(ValueError, match="not normalized"):
        sample(s, 0)


# ---------------------------------------------------------------------------
# full matrix
# ---------------------------------------------------------------------------

def test_full_matrix_of_hzh_is_not_gate():
    m = full_matrix(load_fixture("hzh.qcir"))
    assert np.abs(m - builtin("NOT").matrix).max() < 1e-12


def test_full_matrix_of_hih_is_identity():
    m = full_matrix(load_fixture("hih.qcir"))
    assert np.abs(m - np.eye(2)).max() < 1e-12


def test_full_matrix_of_empty_circuit():
    c = Circuit(name="t", registers=2, mode=Mode.QUANTUM_REAL, inputs=2)
    assert np.array_equal(full_matrix(c), np.eye(4))


def test_full_matrix_width_guard():
    c = Circuit(name="t", registers=13, mode=Mode.DETERMINISTIC, inputs=13)
    with pytest.raises(ValueError, match="at most 12"):
        full_matrix(c)


def test_apply_gate_matches_full_matrix_for_cnot_orders():
    for targets in ((1, 2), (2, 1)):
        c = Circuit(name="t", registers=2, mode=Mode.QUANTUM_REAL, inputs=2,
                    gates=(GateApplication(builtin("CNOT"), targets),))
        m = full_matrix(c)
        for index in range(4):
            bits = unpack_bits(index, 2)
            s = run(c, bits)
            assert np.array_equal(s.amps, m[:, index])


# ---------------------------------------------------------------------------
# probabilistic oracle and invariants
# ---------------------------------------------------------------------------

def test_branch_enumeration_matches_observe_on_majority(maj3):
    oracle = enumerate_branches(maj3, (), 1)
    dist = observe_outputs(run(maj3), 1)
    for key in set(oracle) | set(dist):
        assert abs(oracle.get(key, 0.0) - dist.get(key, 0.0)) < 1e-9


def test_branch_enumeration_matches_observe_on_random_circuits():
    rng = np.random.default_rng(23)
    for _ in range(20):
        registers = int(rng.integers(1, 5))
        c = random_probabilistic_circuit(
            rng, registers, int(rng.integers(0, 12)), int(rng.integers(1, 7)), bias=None,
        )
        input_bits = tuple(int(b) for b in rng.integers(0, 2, size=registers))
        oracle = enumerate_branches(c, input_bits, registers)
        dist = observe_outputs(run(c, input_bits), registers)
        for key in set(oracle) | set(dist):
            assert abs(oracle.get(key, 0.0) - dist.get(key, 0.0)) < 1e-9


def test_global_sign_change_is_unobservable():
    rng = np.random.default_rng(24)
    base = random_quantum_circuit(rng, 3, 15, ("H", "Z", "CNOT", "T"))
    flipped_gates = []
    flip_at = int(rng.integers(len(base.gates)))
    for i, ga in enumerate(base.gates):
        if i == flip_at:
            negated = custom(f"neg_{ga.gate.name}", ga.gate.arity, -ga.gate.matrix)
            flipped_gates.append(GateApplication(negated, ga.targets))
        else:
            flipped_gates.append(ga)
    flipped = Circuit(
        name="t", registers=3, mode=Mode.QUANTUM_REAL, inputs=3, outputs=3,
        gates=tuple(flipped_gates),
    )
    for input_bits in itertools.product((0, 1), repeat=3):
        d1 = observe_outputs(run(base, input_bits), 3)
        d2 = observe_outputs(run(flipped, input_bits), 3)
        for key in set(d1) | set(d2):
            assert abs(d1.get(key, 0.0) - d2.get(key, 0.0)) < 1e-12


def test_probabilistic_states_stay_in_the_simplex():
    rng = np.random.default_rng(25)
    from qcir import in_simplex

    for _ in range(10):
        c = random_probabilistic_circuit(rng, 4, 10, 4, bias=None)
        input_bits = tuple(int(b) for b in rng.integers(0, 2, size=4))
        seen = []
        run(c, input_bits, on_state=lambda step, s: seen.append(in_simplex(s)))
        assert all(seen)


def test_width_cap_can_be_overridden(monkeypatch):
    c = Circuit(name="t", registers=3, mode=Mode.DETERMINISTIC, inputs=3)
    monkeypatch.setenv("QCIR_MAX_QUBITS", "2")
    with pytest.raises(ValueError, match="exceeds the cap"):
        run(c, (0, 0, 0))
    monkeypatch.setenv("QCIR_MAX_QUBITS", "3")
    run(c, (0, 0, 0))
