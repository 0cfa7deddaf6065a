"""Dense vector/matrix helpers: norms, inner products, matrix-class predicates,
and the complex-to-real block embedding.

Values are plain numpy arrays. The field tag (real vs complex) is the dtype:
float64 arrays are real-tagged, complex128 arrays are complex-tagged. All
predicates tolerate complex-dtype input whose imaginary part is negligible;
a matrix with genuinely complex entries simply fails the real-only classes.
"""
from __future__ import annotations

import numpy as np

#: Default tolerance for all matrix-class predicates. Loose enough to absorb
#: accumulation over ~100-gate circuit products, tight enough to reject any
#: genuinely non-conforming matrix.
DEFAULT_EPS = 1e-9


class ModeError(ValueError):
    """A real-only operation was given complex-valued input."""


def l1_norm(v: np.ndarray) -> float:
    """Sum of absolute values of a real vector.

    Raises ModeError for complex-tagged input: the l1 norm is only used for
    probability vectors, which are real by construction.
    """
    v = np.asarray(v)
    if np.iscomplexobj(v):
        raise ModeError("l1_norm is defined for real-tagged vectors only")
    return float(np.abs(v).sum())


def l2_norm(v: np.ndarray) -> float:
    """Euclidean norm, using the complex modulus entrywise."""
    return float(np.linalg.norm(np.asarray(v).ravel()))


def hermitian_inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Inner product sum(conj(u_i) * v_i); real nonnegative when u == v."""
    u = np.asarray(u).ravel()
    v = np.asarray(v).ravel()
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T.copy()


def _real_part(m: np.ndarray, eps: float) -> np.ndarray | None:
    """Real part of m, or None if the imaginary part exceeds eps anywhere."""
    m = np.asarray(m)
    if np.iscomplexobj(m):
        if np.abs(m.imag).max(initial=0.0) > eps:
            return None
        return m.real
    return m


def is_columnwise_stochastic(m: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    """True iff m is real with nonnegative entries and unit column sums."""
    r = _real_part(m, eps)
    if r is None:
        return False
    if r.min(initial=0.0) < -eps:
        return False
    return bool(np.abs(r.sum(axis=0) - 1.0).max(initial=0.0) <= eps)


def is_orthogonal(m: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    """True iff m is real and square with m @ m.T == m.T @ m == I within eps."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    r = _real_part(m, eps)
    if r is None:
        return False
    eye = np.eye(r.shape[0])
    return bool(
        np.abs(r @ r.T - eye).max() <= eps and np.abs(r.T @ r - eye).max() <= eps
    )


def is_unitary(m: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    """True iff m is square with m @ adj(m) == adj(m) @ m == I within eps."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    mh = m.conj().T
    eye = np.eye(m.shape[0])
    return bool(
        np.abs(m @ mh - eye).max() <= eps and np.abs(mh @ m - eye).max() <= eps
    )


def is_permutation(m: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    """True iff m is a real 0/1 matrix with exactly one 1 per row and column."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    r = _real_part(m, eps)
    if r is None:
        return False
    near_one = np.abs(r - 1.0) <= eps
    near_zero = np.abs(r) <= eps
    if not np.all(near_one | near_zero):
        return False
    ones_per_col = near_one.sum(axis=0)
    ones_per_row = near_one.sum(axis=1)
    return bool(np.all(ones_per_col == 1) and np.all(ones_per_row == 1))


def realify(m: np.ndarray) -> np.ndarray:
    """Embed a complex k x l matrix as a real 2k x 2l matrix.

    Entry x+yi at (i, j) becomes the block [[x, -y], [y, x]] at rows 2i, 2i+1
    and columns 2j, 2j+1, so the imaginary dimension is the least significant
    index. The embedding is a ring homomorphism (realify(M @ N) ==
    realify(M) @ realify(N)) that turns adjoints into transposes, hence
    unitary matrices into orthogonal ones.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    rows, cols = m.shape
    out = np.empty((2 * rows, 2 * cols))
    out[0::2, 0::2] = m.real
    out[0::2, 1::2] = -m.imag
    out[1::2, 0::2] = m.imag
    out[1::2, 1::2] = m.real
    return out


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Largest entrywise absolute difference."""
    return float(np.abs(np.asarray(a) - np.asarray(b)).max(initial=0.0))
