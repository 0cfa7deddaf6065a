"""Tests for norms, inner products, matrix-class predicates, and realify."""
import numpy as np
import pytest

from qcir import linalg
from qcir.gates import builtin
from qcir.linalg import (
    ModeError,
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

from conftest import random_unitary

SQ2 = 1 / np.sqrt(2)

AND = builtin("AND").matrix
OR = builtin("OR").matrix
H = builtin("H").matrix
T = builtin("T").matrix
TOFFOLI = builtin("TOFFOLI").matrix
PHASE8 = builtin("PHASE8").matrix


# ---------------------------------------------------------------------------
# norms and inner products
# ---------------------------------------------------------------------------

def test_l1_norm_probability_vectors():
    assert l1_norm(np.array([0.5, 0.5])) == 1.0
    basis = np.zeros(8)
    basis[3] = 1.0
    assert l1_norm(basis) == 1.0
    assert l1_norm(np.array([0.25, 0.25, 0.5])) == 1.0


def test_l1_norm_rejects_complex():
    with pytest.raises(ModeError):
        l1_norm(np.array([1j, 0.0]))


def test_l2_norm():
    assert l2_norm(np.array([SQ2, SQ2])) == pytest.approx(1.0, abs=1e-15)
    assert l2_norm(np.array([3.0, 4.0])) == 5.0
    assert l2_norm(np.array([0.0, 1j])) == 1.0


def test_hermitian_inner():
    e0 = np.array([1.0, 0.0])
    assert hermitian_inner(e0, e0) == 1.0
    assert hermitian_inner(np.array([1j, 0]), np.array([1j, 0])) == 1.0
    assert hermitian_inner(np.array([1, 1j]), np.array([1, -1j])) == 0.0


def test_hermitian_inner_conjugates_first_argument():
    u = np.array([1j, 0.0])
    v = np.array([1.0, 0.0])
    assert hermitian_inner(u, v) == pytest.approx(-1j)


def test_hermitian_inner_length_mismatch():
    with pytest.raises(ValueError, match="length mismatch"):
        hermitian_inner(np.zeros(2), np.zeros(3))


def test_matmul():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matmul(np.eye(2), m), m)
    assert np.allclose(matmul(H, H), np.eye(2), atol=1e-15)
    z = np.diag([1.0, -1.0])
    assert np.array_equal(matmul(z, z), np.eye(2))
    with pytest.raises(ValueError, match="dimension mismatch"):
        matmul(np.eye(2), np.eye(3))


def test_adjoint():
    assert np.array_equal(adjoint(np.eye(2)), np.eye(2))
    m = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.array_equal(adjoint(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    phase = np.diag([1.0, np.exp(1j * np.pi / 4)])
    assert np.allclose(adjoint(phase), np.diag([1.0, np.exp(-1j * np.pi / 4)]))


# ---------------------------------------------------------------------------
# class predicates
# ---------------------------------------------------------------------------

def test_stochastic_biased_coin():
    m = np.array([[5 / 8, 1 / 4], [3 / 8, 3 / 4]])
    assert is_columnwise_stochastic(m)


def test_stochastic_and_gate():
    assert is_columnwise_stochastic(AND)


def test_stochastic_rejects_hadamard():
    # H has a negative entry, so it cannot be stochastic
    assert not is_columnwise_stochastic(H)


def test_orthogonal():
    assert is_orthogonal(H)
    assert is_orthogonal(TOFFOLI)
    assert not is_orthogonal(AND)
    with pytest.raises(ValueError, match="square"):
        is_orthogonal(np.ones((2, 3)))


def test_unitary():
    assert is_unitary(PHASE8)
    assert is_unitary(H)
    assert not is_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_permutation():
    assert is_permutation(TOFFOLI)
    assert is_permutation(np.eye(4))
    assert not is_permutation(AND)


def test_predicates_respect_eps():
    near = np.eye(2) + 1e-11
    assert is_permutation(near, eps=1e-9)
    assert not is_permutation(near, eps=1e-13)


# ---------------------------------------------------------------------------
# realify
# ---------------------------------------------------------------------------

def test_realify_phase_gate_is_t():
    assert np.array_equal(realify(PHASE8), T)


def test_realify_identity():
    assert np.array_equal(realify(np.eye(2, dtype=complex)), np.eye(4))


def test_realify_imaginary_unit():
    assert np.array_equal(realify(np.array([[1j]])), np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_realify_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        b = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        assert np.abs(realify(a @ b) - realify(a) @ realify(b)).max() < 1e-12


def test_realify_adjoint_is_transpose():
    rng = np.random.default_rng(12)
    for _ in range(20):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.array_equal(realify(m.conj().T), realify(m).T)


def test_unitary_iff_realified_orthogonal():
    rng = np.random.default_rng(13)
    for dim in (2, 4, 8):
        for _ in range(10):
            u = random_unitary(rng, dim)
            assert is_unitary(u)
            assert is_orthogonal(realify(u))
            bent = u + 0.01 * rng.normal(size=(dim, dim))
            assert is_unitary(bent) == is_orthogonal(realify(bent))


# ---------------------------------------------------------------------------
# cross-class invariants
# ---------------------------------------------------------------------------

def test_permutations_are_orthogonal_and_stochastic():
    rng = np.random.default_rng(14)
    for _ in range(20):
        dim = int(rng.integers(2, 9))
        p = np.eye(dim)[rng.permutation(dim)]
        assert is_orthogonal(p)
        assert is_columnwise_stochastic(p)


def test_inner_product_matches_l2_norm():
    rng = np.random.default_rng(15)
    for _ in range(20):
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        inner = hermitian_inner(v, v)
        assert inner.imag == 0.0
        assert abs(inner.real - l2_norm(v) ** 2) < 1e-12


def test_stochastic_preserves_l1_on_nonnegative_vectors():
    rng = np.random.default_rng(16)
    for _ in range(20):
        dim = int(rng.integers(2, 9))
        m = rng.uniform(size=(dim, dim))
        m /= m.sum(axis=0)
        v = rng.uniform(size=dim)
        assert abs(l1_norm(m @ v) - l1_norm(v)) < 1e-12


def test_orthogonal_and_unitary_preserve_l2():
    rng = np.random.default_rng(17)
    for _ in range(20):
        u = random_unitary(rng, 8)
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert abs(l2_norm(u @ v) - l2_norm(v)) < 1e-12
    v = rng.normal(size=2)
    assert abs(l2_norm(H @ v) - l2_norm(v)) < 1e-12
