"""Verification and transformation passes.

- reversibility and clean-ancilla checks
- circuit equivalence up to a global sign / unit phase
- complex -> real circuit rewrite (one extra ancilla, block-embedded gates)
- Toffoli -> {CNOT, H, T, TINV} substitution with one shared clean ancilla
- acceptance criteria (R, A) over observation probabilities
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import gates, linalg
from .circuit import Circuit, GateApplication, Mode, add_registers
from .simulate import (
    FULL_MATRIX_MAX_REGISTERS,
    full_matrix,
    observation_weights,
    observe_outputs,
    run,
)

#: Cap on exhaustive enumeration of circuit inputs.
MAX_EXHAUSTIVE_INPUTS = 16


# ---------------------------------------------------------------------------
# reversibility / ancilla hygiene
# ---------------------------------------------------------------------------

def check_reversible(circuit: Circuit, eps: float = linalg.DEFAULT_EPS) -> bool:
    """Whether the whole-circuit matrix is invertible within its gate class.

    Deterministic and probabilistic circuits must compose to a permutation;
    quantum-real to an orthogonal matrix; quantum-complex to a unitary.
    """
    matrix = full_matrix(circuit)
    if circuit.mode in (Mode.DETERMINISTIC, Mode.PROBABILISTIC):
        return linalg.is_permutation(matrix, eps)
    if circuit.mode is Mode.QUANTUM_REAL:
        return linalg.is_orthogonal(matrix, eps)
    return linalg.is_unitary(matrix, eps)


def enumerate_inputs(circuit: Circuit):
    """All input basis tuples of a circuit, in lexicographic order."""
    if circuit.inputs > MAX_EXHAUSTIVE_INPUTS:
        raise ValueError(
            f"{circuit.inputs} inputs is too many for an exhaustive check "
            f"(cap {MAX_EXHAUSTIVE_INPUTS})"
        )
    return itertools.product((0, 1), repeat=circuit.inputs)


def check_clean_ancilla(
    circuit: Circuit,
    ancillas: tuple[int, ...],
    eps: float = linalg.DEFAULT_EPS,
) -> bool:
    """Whether the given noninput registers end in their initial values.

    For every input basis state the total probability mass on final states
    where any listed ancilla differs from its initial value must be <= eps.
    """
    for reg in ancillas:
        if not circuit.inputs < reg <= circuit.registers:
            raise ValueError(f"r{reg} is not a noninput register")
    if not ancillas:
        return True
    for input_bits in enumerate_inputs(circuit):
        weights = observation_weights(run(circuit, input_bits))
        weights = weights.reshape((2,) * circuit.registers)
        index: list[object] = [slice(None)] * circuit.registers
        for reg in ancillas:
            index[reg - 1] = circuit.init_value(reg)
        stray = float(weights.sum() - weights[tuple(index)].sum())
        if stray > eps:
            return False
    return True


# ---------------------------------------------------------------------------
# equivalence up to global sign / phase
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    scale: complex  # the unit factor s with matrix1 ~= s * matrix2
    max_deviation: float

    def __str__(self) -> str:
        if self.equivalent:
            return f"equivalent with scale {_format_scale(self.scale)}"
        return f"distinct, max deviation {self.max_deviation:.6g}"


def _format_scale(s: complex) -> str:
    if s.imag == 0.0:
        return f"{s.real:g}"
    return f"{s.real:.12g}{'+' if s.imag >= 0 else '-'}{abs(s.imag):.12g}i"


def circuits_equivalent(a: Circuit, b: Circuit, eps: float = 1e-9) -> EquivalenceReport:
    """Compare whole-circuit matrices up to one unconditional unit factor.

    The factor is a sign when both circuits are real, a unit complex number
    otherwise, fixed from the first column pair of nonnegligible norm.
    """
    if a.registers != b.registers:
        raise ValueError(f"width mismatch: {a.registers} vs {b.registers} registers")
    for c in (a, b):
        if c.mode not in (Mode.QUANTUM_REAL, Mode.QUANTUM_COMPLEX):
            raise ValueError(f"equivalence is defined for quantum circuits, got {c.mode}")
    m1 = full_matrix(a)
    m2 = full_matrix(b)
    both_real = not (np.iscomplexobj(m1) or np.iscomplexobj(m2))

    scale: complex = 1.0
    for j in range(m1.shape[1]):
        if np.linalg.norm(m1[:, j]) > 1e-6 and np.linalg.norm(m2[:, j]) > 1e-6:
            overlap = complex(np.vdot(m2[:, j], m1[:, j]))
            if abs(overlap) > 1e-12:
                scale = (
                    (1.0 if overlap.real >= 0.0 else -1.0)
                    if both_real
                    else overlap / abs(overlap)
                )
            break
    deviation = linalg.max_abs_diff(m1, scale * m2)
    return EquivalenceReport(deviation <= eps, scale, deviation)


# ---------------------------------------------------------------------------
# complex -> real rewrite
# ---------------------------------------------------------------------------

def realify_circuit(circuit: Circuit) -> Circuit:
    """Rewrite a complex-amplitude circuit over real amplitudes.

    Adds one ancilla register (the new least significant register, init 0)
    holding the imaginary dimension. Every gate with a nonreal entry becomes
    the block-embedded real gate of arity+1 acting on (targets..., ancilla);
    all-real gates pass through untouched. Observation distributions over
    the original registers are preserved.
    """
    if circuit.mode is not Mode.QUANTUM_COMPLEX:
        raise ValueError(f"expected a quantum-complex circuit, got {circuit.mode}")
    ancilla = circuit.registers + 1
    new_gates = []
    for ga in circuit.gates:
        matrix = ga.gate.matrix
        if np.iscomplexobj(matrix) and np.abs(matrix.imag).max(initial=0.0) > 0.0:
            if ga.gate.name == "PHASE8":
                gate = gates.builtin("T")  # realify(PHASE8) is exactly T
            else:
                gate = gates.custom(
                    f"rho_{ga.gate.name}", ga.gate.arity + 1, linalg.realify(matrix)
                )
            new_gates.append(GateApplication(gate, ga.targets + (ancilla,)))
        else:
            gate = ga.gate
            if np.iscomplexobj(matrix):  # complex dtype but real values: retag
                gate = gates._make(gate.name, gate.arity, matrix.real)
            new_gates.append(GateApplication(gate, ga.targets))
    return Circuit(
        name=circuit.name,
        registers=ancilla,
        mode=Mode.QUANTUM_REAL,
        inputs=circuit.inputs,
        outputs=circuit.outputs,
        ancilla_init=circuit.ancilla_init + (0,),
        gates=tuple(new_gates),
    )


def verify_realified(original: Circuit, transformed: Circuit, eps: float = 1e-9) -> tuple[bool, str]:
    """Certify a realified circuit against its complex original.

    At debug widths the transformed matrix must equal the block embedding of
    the original matrix; otherwise fall back to comparing observation
    distributions on every input.
    """
    if transformed.registers <= FULL_MATRIX_MAX_REGISTERS:
        deviation = linalg.max_abs_diff(
            full_matrix(transformed), linalg.realify(full_matrix(original))
        )
        ok = deviation <= eps
        return ok, f"matrix deviation {deviation:.3g}"
    worst = 0.0
    for input_bits in enumerate_inputs(original):
        d1 = observe_outputs(run(original, input_bits), original.registers)
        d2 = observe_outputs(run(transformed, input_bits), original.registers)
        worst = max(worst, _distribution_distance(d1, d2))
    return worst <= eps, f"distribution deviation {worst:.3g}"


def _distribution_distance(
    d1: dict[tuple[int, ...], float], d2: dict[tuple[int, ...], float]
) -> float:
    keys = set(d1) | set(d2)
    return max((abs(d1.get(k, 0.0) - d2.get(k, 0.0)) for k in keys), default=0.0)


def distributions_close(
    d1: dict[tuple[int, ...], float],
    d2: dict[tuple[int, ...], float],
    eps: float = 1e-9,
) -> bool:
    """Whether two outcome distributions agree within eps pointwise."""
    return _distribution_distance(d1, d2) <= eps


# ---------------------------------------------------------------------------
# Toffoli -> {CNOT, H, T, TINV}
# ---------------------------------------------------------------------------

# Substitution template over placeholder registers: 1, 2 = controls,
# 3 = target, 4 = the shared ancilla. Obtained by block-embedding the
# standard complex decomposition of the doubly-controlled NOT over
# {H, CNOT, conditional phase, inverse phase}; the composite equals
# Toffoli x I exactly (scale +1) and leaves the ancilla clean.
_TOFFOLI_TEMPLATE: tuple[tuple[str, tuple[int, ...]], ...] = (
    ("H", (3,)),
    ("CNOT", (2, 3)),
    ("TINV", (3, 4)),
    ("CNOT", (1, 3)),
    ("T", (3, 4)),
    ("CNOT", (2, 3)),
    ("TINV", (3, 4)),
    ("CNOT", (1, 3)),
    ("T", (2, 4)),
    ("T", (3, 4)),
    ("H", (3,)),
    ("CNOT", (1, 2)),
    ("T", (1, 4)),
    ("TINV", (2, 4)),
    ("CNOT", (1, 2)),
)


def decompose_toffoli(circuit: Circuit) -> Circuit:
    """Replace every TOFFOLI with a {CNOT, H, T, TINV} subcircuit.

    All replacements share a single new ancilla register (init 0, appended
    last); it is used cleanly. Circuits without Toffoli gates are returned
    unchanged. Boolean circuits must be lifted to quantum-real mode first.
    """
    if circuit.mode is not Mode.QUANTUM_REAL:
        raise ValueError(f"expected a quantum-real circuit, got {circuit.mode}")
    if not any(ga.gate.name == "TOFFOLI" for ga in circuit.gates):
        return circuit
    ancilla = circuit.registers + 1
    new_gates = []
    for ga in circuit.gates:
        if ga.gate.name != "TOFFOLI":
            new_gates.append(ga)
            continue
        slot = {1: ga.targets[0], 2: ga.targets[1], 3: ga.targets[2], 4: ancilla}
        for name, places in _TOFFOLI_TEMPLATE:
            new_gates.append(
                GateApplication(gates.builtin(name), tuple(slot[p] for p in places))
            )
    return Circuit(
        name=circuit.name,
        registers=ancilla,
        mode=Mode.QUANTUM_REAL,
        inputs=circuit.inputs,
        outputs=circuit.outputs,
        ancilla_init=circuit.ancilla_init + (0,),
        gates=tuple(new_gates),
    )


def verify_decomposed(original: Circuit, transformed: Circuit, eps: float = 1e-9) -> tuple[bool, str]:
    """Certify a Toffoli-free rewrite: equivalent to original x idle ancilla,
    with the shared ancilla clean."""
    if transformed.registers == original.registers:
        return True, "no substitution performed"
    widened = add_registers(original, 1)
    report = circuits_equivalent(widened, transformed, eps)
    if not report.equivalent:
        return False, f"not equivalent ({report})"
    if not check_clean_ancilla(transformed, (transformed.registers,), eps):
        return False, "shared ancilla is not clean"
    return True, f"equivalent with scale {_format_scale(report.scale)}, ancilla clean"


# ---------------------------------------------------------------------------
# simplex membership
# ---------------------------------------------------------------------------

def in_simplex(state, eps: float = linalg.DEFAULT_EPS) -> bool:
    """Whether a state is a convex combination of basis states.

    True iff the amplitudes are (negligibly-complex) reals, all >= -eps,
    summing to 1 within eps.
    """
    amps = np.asarray(state.amps if hasattr(state, "amps") else state)
    if np.iscomplexobj(amps):
        if np.abs(amps.imag).max(initial=0.0) > eps:
            return False
        amps = amps.real
    return bool(amps.min() >= -eps and abs(np.abs(amps).sum() - 1.0) <= eps)


# ---------------------------------------------------------------------------
# acceptance criteria
# ---------------------------------------------------------------------------

class Verdict(enum.Enum):
    REJECT = "reject"
    ACCEPT = "accept"
    UNDEFINED = "undefined"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Interval:
    """A subinterval of [0, 1] with individually open or closed endpoints."""
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"interval [{self.lo}, {self.hi}] must sit inside [0, 1]")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("an interval with equal endpoints must be closed (a point)")

    def contains(self, x: float) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def intersects(self, other: "Interval") -> bool:
        lo, lo_closed = max(
            (self.lo, self.lo_closed), (other.lo, other.lo_closed),
            key=lambda t: (t[0], not t[1]),
        )
        hi, hi_closed = min(
            (self.hi, self.hi_closed), (other.hi, other.hi_closed),
            key=lambda t: (t[0], t[1]),
        )
        return lo < hi or (lo == hi and lo_closed and hi_closed)

    def __str__(self) -> str:
        if self.lo == self.hi:
            return f"{{{_format_bound(self.lo)}}}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_format_bound(self.lo)},{_format_bound(self.hi)}{right}"


def _format_bound(x: float) -> str:
    for den in (1, 2, 3, 4, 6, 8):
        if x * den == int(x * den):
            num = int(x * den)
            return f"{num}/{den}" if den > 1 else f"{num}"
    return repr(x)


@dataclass(frozen=True)
class AcceptanceCriterion:
    """A pair (R, A) of disjoint interval unions classifying P(output = 1)."""
    reject: tuple[Interval, ...]
    accept: tuple[Interval, ...]

    def __post_init__(self) -> None:
        for r in self.reject:
            for a in self.accept:
                if r.intersects(a):
                    raise ValueError(f"reject {r} and accept {a} overlap")

    def evaluate(self, p: float) -> Verdict:
        """Classify an observation probability; endpoint openness is exact."""
        if not -1e-9 <= p <= 1.0 + 1e-9:
            raise ValueError(f"probability {p} outside [0, 1]")
        p = min(max(p, 0.0), 1.0)
        if any(i.contains(p) for i in self.accept):
            return Verdict.ACCEPT
        if any(i.contains(p) for i in self.reject):
            return Verdict.REJECT
        return Verdict.UNDEFINED

    def __str__(self) -> str:
        fmt = lambda u: "u".join(str(i) for i in u) or "{}"
        return f"reject {fmt(self.reject)}, accept {fmt(self.accept)}"


def _point(x: float) -> Interval:
    return Interval(x, x)


#: Acceptance criteria of the classical and quantum complexity-class tables.
PRESET_CRITERIA: dict[str, AcceptanceCriterion] = {
    "P": AcceptanceCriterion((_point(0.0),), (_point(1.0),)),
    "NP": AcceptanceCriterion((_point(0.0),), (Interval(0.0, 1.0, lo_closed=False),)),
    "RP": AcceptanceCriterion((_point(0.0),), (Interval(0.5, 1.0, lo_closed=False),)),
    "BPP": AcceptanceCriterion((Interval(0.0, 1 / 3),), (Interval(2 / 3, 1.0),)),
    "PP": AcceptanceCriterion((Interval(0.0, 0.5),), (Interval(0.5, 1.0, lo_closed=False),)),
    "EQP": AcceptanceCriterion((_point(0.0),), (_point(1.0),)),
    "CEQP": AcceptanceCriterion((_point(0.0),), (Interval(0.0, 1.0, lo_closed=False),)),
    "RQP": AcceptanceCriterion((_point(0.0),), (Interval(0.5, 1.0, lo_closed=False),)),
    "BQP": AcceptanceCriterion((Interval(0.0, 1 / 3),), (Interval(2 / 3, 1.0),)),
}

_INTERVAL_RE = re.compile(r"(?P<left>[\[(])(?P<lo>[^,]+),(?P<hi>[^\])]+)(?P<right>[\])])\Z")
_POINT_RE = re.compile(r"\{(?P<x>[^}]+)\}\Z")


def _parse_bound(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def parse_interval_union(text: str) -> tuple[Interval, ...]:
    """Parse interval-union syntax: ``[0,1/3]``, ``{0}``, ``(1/2,1]u{0}``."""
    pieces = [p.strip() for p in re.split(r"\s*u\s*", text.strip()) if p.strip()]
    if not pieces:
        raise ValueError("empty interval union")
    out = []
    for piece in pieces:
        point = _POINT_RE.match(piece)
        if point:
            out.append(_point(_parse_bound(point.group("x"))))
            continue
        m = _INTERVAL_RE.match(piece)
        if not m:
            raise ValueError(f"bad interval {piece!r}; expected [a,b], (a,b], or {{x}}")
        out.append(
            Interval(
                _parse_bound(m.group("lo")),
                _parse_bound(m.group("hi")),
                lo_closed=m.group("left") == "[",
                hi_closed=m.group("right") == "]",
            )
        )
    return tuple(out)
