"""qcir: deterministic, probabilistic, and quantum circuits over n registers.

One circuit model, four semantics (deterministic, probabilistic,
quantum-real, quantum-complex), with a text format, a state-vector
simulator, verification passes, equivalence checking, and gate-set
transpilation (complex -> real embedding, Toffoli -> {CNOT, H, T}).
"""
from .analysis import (
    AcceptanceCriterion,
    EquivalenceReport,
    Interval,
    Verdict,
    PRESET_CRITERIA,
    check_clean_ancilla,
    check_reversible,
    circuits_equivalent,
    decompose_toffoli,
    distributions_close,
    enumerate_inputs,
    in_simplex,
    parse_interval_union,
    realify_circuit,
)
from .circuit import (
    Circuit,
    GateApplication,
    Mode,
    Violation,
    add_registers,
    admissible,
    append,
    concat,
    structurally_equal,
    to_straight_line,
    validate,
    with_mode,
)
from .dsl import DslError, ParseError, SourceSpan, parse, serialize, try_parse
from .gates import GateClassFlags, GateSpec, builtin, classify, coin_flip, custom
from .linalg import (
    adjoint,
    hermitian_inner,
    is_columnwise_stochastic,
    is_orthogonal,
    is_permutation,
    is_unitary,
    l1_norm,
    l2_norm,
    matmul,
    realify,
)
from .simulate import (
    SimulationError,
    StateVector,
    apply_gate,
    bits_to_str,
    full_matrix,
    initial_state,
    observe_outputs,
    run,
    run_deterministic,
    sample,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceCriterion", "Circuit", "DslError", "EquivalenceReport",
    "GateApplication", "GateClassFlags", "GateSpec", "Interval", "Mode",
    "ParseError", "PRESET_CRITERIA", "SimulationError", "SourceSpan",
    "StateVector", "Verdict", "Violation",
    "add_registers", "adjoint", "admissible", "append", "apply_gate",
    "bits_to_str", "builtin", "check_clean_ancilla", "check_reversible",
    "circuits_equivalent", "classify", "coin_flip", "concat", "custom",
    "decompose_toffoli", "distributions_close", "enumerate_inputs", "full_matrix",
    "hermitian_inner", "in_simplex", "initial_state",
    "is_columnwise_stochastic", "is_orthogonal", "is_permutation",
    "is_unitary", "l1_norm", "l2_norm", "matmul", "observe_outputs",
    "parse", "parse_interval_union", "realify", "realify_circuit", "run",
    "run_deterministic", "sample", "serialize", "structurally_equal",
    "to_straight_line", "try_parse", "validate", "with_mode",
]
