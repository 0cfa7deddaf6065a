"""Gate definitions and classification.

Built-in gates (matrix column/row order is lexicographic in the register
values, first listed register most significant):

- NOT, IDENT            1-register Boolean
- AND, OR, XOR, CNOT    2-register Boolean, first register control (unchanged),
                        second register target (receives the result)
- TOFFOLI               3-register, two controls then target
- H, Z                  1-register real quantum gates
- T, TINV               2-register real rotation pair (T is the real embedding
                        of the conditional phase shift; TINV = T^7 = T^-1)
- PHASE8                1-register complex gate diag(1, e^{i pi/4})

FLIP(p, q) gates come from :func:`coin_flip`; anything else from
:func:`custom`.  Every gate carries class flags (boolean / stochastic /
orthogonal / unitary / permutation) computed from its matrix at
construction; the flags decide which circuit semantics admit the gate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg

_SQRT2_INV = 1.0 / np.sqrt(2.0)
_COS8 = float(np.cos(np.pi / 4))
_SIN8 = float(np.sin(np.pi / 4))

#: Gate names reserved by the DSL and the library.
BUILTIN_NAMES = (
    "NOT", "AND", "OR", "XOR", "CNOT", "TOFFOLI",
    "H", "Z", "IDENT", "T", "TINV", "PHASE8",
)


@dataclass(frozen=True)
class GateClassFlags:
    """Which matrix classes a gate belongs to.

    boolean means the matrix maps basis states to basis states (0/1 entries,
    one 1 per column); permutation implies orthogonal implies unitary, and
    boolean implies stochastic.
    """
    boolean: bool
    stochastic: bool
    orthogonal: bool
    unitary: bool
    permutation: bool


@dataclass(frozen=True, eq=False)
class GateSpec:
    """A named gate: arity, matrix (square, 2^arity), and class flags."""
    name: str
    arity: int
    matrix: np.ndarray
    flags: GateClassFlags

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GateSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.arity == other.arity
            and self.matrix.shape == other.matrix.shape
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def __hash__(self) -> int:
        return hash((self.name, self.arity))

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.matrix))

    def __repr__(self) -> str:
        return f"GateSpec({self.name!r}, arity={self.arity})"


def _is_boolean_matrix(m: np.ndarray, eps: float) -> bool:
    """0/1 entries with exactly one 1 per column: a function on basis states."""
    if np.iscomplexobj(m):
        if np.abs(m.imag).max(initial=0.0) > eps:
            return False
        m = m.real
    near_one = np.abs(m - 1.0) <= eps
    near_zero = np.abs(m) <= eps
    return bool(np.all(near_one | near_zero) and np.all(near_one.sum(axis=0) == 1))


def classify(gate_or_matrix, eps: float = linalg.DEFAULT_EPS) -> GateClassFlags:
    """Compute the class flags of a gate (or of a bare square matrix)."""
    matrix = np.asarray(getattr(gate_or_matrix, "matrix", gate_or_matrix))
    orthogonal = linalg.is_orthogonal(matrix, eps)
    return GateClassFlags(
        boolean=_is_boolean_matrix(matrix, eps),
        stochastic=linalg.is_columnwise_stochastic(matrix, eps),
        orthogonal=orthogonal,
        unitary=linalg.is_unitary(matrix, eps),
        permutation=linalg.is_permutation(matrix, eps),
    )


def _make(name: str, arity: int, matrix: np.ndarray) -> GateSpec:
    matrix = np.array(matrix, dtype=complex if np.iscomplexobj(matrix) else float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"gate {name}: matrix is not square: {matrix.shape}")
    if matrix.shape[0] != 2 ** arity:
        raise ValueError(
            f"gate {name}: matrix dimension {matrix.shape[0]} != 2^{arity}"
        )
    if not np.all(np.isfinite(matrix.view(float))):
        raise ValueError(f"gate {name}: matrix has non-finite entries")
    matrix.setflags(write=False)
    return GateSpec(name=name, arity=arity, matrix=matrix, flags=classify(matrix))


def _toffoli_matrix() -> np.ndarray:
    m = np.eye(8)
    m[[6, 7]] = m[[7, 6]]  # |110> <-> |111>
    return m


_T_MATRIX = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, _COS8, -_SIN8],
    [0.0, 0.0, _SIN8, _COS8],
])

_BUILTINS: dict[str, GateSpec] = {
    "NOT": _make("NOT", 1, [[0.0, 1.0], [1.0, 0.0]]),
    "IDENT": _make("IDENT", 1, np.eye(2)),
    # (a, b) -> (a, a AND b): columns |00>,|01>,|10>,|11| land on |00>,|00>,|10>,|11>
    "AND": _make("AND", 2, [[1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
    "OR": _make("OR", 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 1]]),
    "XOR": _make("XOR", 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CNOT": _make("CNOT", 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "TOFFOLI": _make("TOFFOLI", 3, _toffoli_matrix()),
    "H": _make("H", 1, _SQRT2_INV * np.array([[1.0, 1.0], [1.0, -1.0]])),
    "Z": _make("Z", 1, [[1.0, 0.0], [0.0, -1.0]]),
    "T": _make("T", 2, _T_MATRIX),
    "TINV": _make("TINV", 2, _T_MATRIX.T),
    # built from cos + i sin so that realify(PHASE8) reproduces T bit-exactly
    "PHASE8": _make("PHASE8", 1, np.array([[1.0, 0.0], [0.0, complex(_COS8, _SIN8)]])),
}


def builtin(name: str) -> GateSpec:
    """Look up a built-in gate by name."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin gate {name!r}") from None


def coin_flip(p: float, q: float) -> GateSpec:
    """Biased coin-flip gate [[p, q], [1-p, 1-q]].

    On input 0 the register becomes 0 with probability p; on input 1 it
    becomes 0 with probability q.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"coin flip biases must lie in [0, 1], got p={p}, q={q}")
    return _make("FLIP", 1, [[p, q], [1.0 - p, 1.0 - q]])


def custom(name: str, arity: int, matrix: np.ndarray) -> GateSpec:
    """User-defined gate; class flags are computed from the matrix."""
    if name in BUILTIN_NAMES or name == "FLIP":
        raise ValueError(f"gate name {name!r} is reserved")
    return _make(name, arity, matrix)
