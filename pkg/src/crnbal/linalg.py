"""Exact rational matrix kernel.

Every yes/no verdict in crnbal is decided here over ``fractions.Fraction``.
Matrices are accepted as anything ``numpy.asarray`` understands (nested lists,
int arrays, object arrays of Fractions); results come back as object arrays
of Fractions (``RationalMatrix``) or tuples of Python ints for integer bases.

Floats are only tolerated by :func:`determinant` and :func:`in_column_space`,
which switch to floating point evaluation with relative tolerance
``FLOAT_RTOL`` when any entry is a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

FLOAT_RTOL = 1e-9

IntVector = tuple  # tuple[int, ...]


def _is_exact(value) -> bool:
    return isinstance(value, (Rational, np.integer))


def _as_fraction(value) -> Fraction:
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"expected an exact rational entry, got {value!r}")


def _rows(M) -> list[list]:
    arr = np.asarray(M, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return [list(row) for row in arr]


def _shape(M) -> tuple[int, int]:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr.shape


def _has_float(M) -> bool:
    arr = np.asarray(M, dtype=object)
    return any(not _is_exact(x) for x in arr.flat)


def rational_matrix(M) -> np.ndarray:
    """Copy ``M`` into an object array of Fractions."""
    arr = np.asarray(M, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _as_fraction(x)
    return out


def _fraction_rows(M) -> list[list[Fraction]]:
    return [[_as_fraction(x) for x in row] for row in _rows(M)]


def integer_normalize(vec: Sequence) -> IntVector:
    """Scale a rational vector to the primitive integer vector on the same ray.

    The sign is preserved. The zero vector maps to itself.
    """
    fracs = [_as_fraction(x) for x in vec]
    if all(f == 0 for f in fracs):
        return tuple(0 for _ in fracs)
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints)


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns:
        The reduced rows (same shape as ``M``) and the list of pivot columns.
    """
    A = _fraction_rows(M)
    n_rows = len(A)
    n_cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n_rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def determinant(M):
    """Determinant of a square matrix.

    Exact input goes through Bareiss fraction-free elimination, so every
    intermediate division is exact. Float input falls back to LU via numpy.
    """
    arr = np.asarray(M, dtype=object)
    if arr.size == 0:
        return Fraction(1)
    n, k = _shape(arr)
    if n != k:
        raise ValueError(f"determinant needs a square matrix, got {n}x{k}")
    if _has_float(M):
        return float(np.linalg.det(np.asarray(M, dtype=float)))
    A = _fraction_rows(M)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
            A[i][k] = Fraction(0)
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M) -> int:
    arr = np.asarray(M, dtype=object)
    if arr.size == 0:
        return 0
    return len(rref(M)[1])


def nullspace_integer_basis(M) -> list[IntVector]:
    """Integer basis of ``ker M``, one primitive vector per free column.

    Each vector sets its free variable to one (then clears denominators), so
    the basis is the standard RREF basis up to positive scaling.
    """
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError("nullspace needs a 2-d matrix")
    n_cols = arr.shape[1]
    if arr.shape[0] == 0:
        return [tuple(int(i == j) for i in range(n_cols)) for j in range(n_cols)]
    R, pivots = rref(arr)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for row, p in zip(R, pivots):
            vec[p] = -row[f]
        basis.append(integer_normalize(vec))
    return basis


def left_nullspace_integer_basis(M) -> list[IntVector]:
    """Integer basis of ``{w : w^T M = 0}``."""
    return nullspace_integer_basis(np.asarray(M, dtype=object).T)


def independent_subset(vectors: Sequence[Sequence]) -> list[IntVector]:
    """Greedy maximal linearly independent subset, in input order, integer-normalized."""
    chosen: list[IntVector] = []
    current = 0
    for v in vectors:
        cand = integer_normalize(v)
        if all(x == 0 for x in cand):
            continue
        trial = chosen + [cand]
        r = rank(trial)
        if r > current:
            chosen.append(cand)
            current = r
    return chosen


def column_space_basis(B) -> list[IntVector]:
    """Integer basis of ``im B`` drawn from the columns of ``B`` (in order)."""
    arr = np.asarray(B, dtype=object)
    return independent_subset([arr[:, j] for j in range(arr.shape[1])])


def matmul(A, B) -> np.ndarray:
    """Exact product of two rational matrices."""
    return rational_matrix(A).dot(rational_matrix(B))


@dataclass(frozen=True)
class Membership:
    """Outcome of a column-space membership test.

    ``coefficients`` solves ``M x = v`` when ``holds``; ``witness`` satisfies
    ``w^T M = 0`` and ``w^T v != 0`` when not. In float mode neither is
    populated and ``residual`` carries the least-squares residual norm.
    """

    holds: bool
    coefficients: Optional[tuple] = None
    witness: Optional[tuple] = None
    residual: Optional[float] = None


def in_column_space(M, v, rtol: float = FLOAT_RTOL) -> Membership:
    arr = np.asarray(M, dtype=object)
    vec = list(np.asarray(v, dtype=object).ravel())
    n_rows, n_cols = arr.shape
    if len(vec) != n_rows:
        raise ValueError(f"vector of length {len(vec)} incompatible with {n_rows} rows")
    if _has_float(arr) or any(not _is_exact(x) for x in vec):
        Mf = np.asarray(arr, dtype=float)
        vf = np.asarray(vec, dtype=float)
        x, *_ = np.linalg.lstsq(Mf, vf, rcond=None)
        res = float(np.linalg.norm(Mf @ x - vf))
        return Membership(res <= rtol * (1.0 + float(np.linalg.norm(vf))), residual=res)

    aug = np.empty((n_rows, n_cols + 1), dtype=object)
    aug[:, :n_cols] = arr
    aug[:, n_cols] = vec
    R, pivots = rref(aug)
    if n_cols in pivots:
        fv = [_as_fraction(x) for x in vec]
        for w in left_nullspace_integer_basis(arr):
            if sum(wi * vi for wi, vi in zip(w, fv)) != 0:
                return Membership(False, witness=w)
        raise AssertionError("inconsistent system without a separating left-kernel vector")
    x = [Fraction(0)] * n_cols
    for row, p in zip(R, pivots):
        x[p] = row[n_cols]
    return Membership(True, coefficients=tuple(x))


def intersection_basis(A, B) -> list[IntVector]:
    """Integer basis of ``ker A ∩ im B``.

    Built as ``B @ ker(A @ B)``; the images are pruned to an independent set.
    """
    Ar = rational_matrix(A)
    Br = rational_matrix(B)
    if Ar.shape[1] != Br.shape[0]:
        raise ValueError(f"incompatible shapes {Ar.shape} and {Br.shape}")
    AB = Ar.dot(Br)
    images = []
    for tau in nullspace_integer_basis(AB):
        images.append(Br.dot(np.array(tau, dtype=object)))
    return independent_subset(images)
