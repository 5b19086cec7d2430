"""Exact dense linear algebra by first-pivot Gaussian elimination.

The raw functions take a Field and a numpy array.  ``Matrix`` wraps the two
together for callers who want mixed-field mistakes caught.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import ContractError, Field


def rref(F: Field, a: np.ndarray):
    """Reduced row echelon form and the list of pivot columns."""
    a = a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = F.inv(a[r, c])
        a[r] = F.reduce(a[r] * inv)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col != 0)
        if hit.size:
            a[hit] = F.reduce(a[hit] - np.outer(col[hit], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank_of(F: Field, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    # eliminate on the thinner side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(F, a)[1])


def kernel_of(F: Field, a: np.ndarray) -> np.ndarray:
    """Columns spanning {x : a x = 0}."""
    rows, cols = a.shape
    if rows == 0:
        return F.eye(cols)
    R, pivots = rref(F, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = F.zeros(cols, len(free))
    for t, c in enumerate(free):
        K[c, t] = F.scalar(1)
        for i, pc in enumerate(pivots):
            K[pc, t] = F.reduce(-R[i, c]) if not F.is_rational else -R[i, c]
    return K


def image_of(F: Field, a: np.ndarray) -> np.ndarray:
    """Pivot columns of a, a basis of its column space."""
    if a.size == 0:
        return F.zeros(a.shape[0], 0)
    _, pivots = rref(F, a)
    return a[:, pivots].copy()


def solve_of(F: Field, a: np.ndarray, b: np.ndarray):
    """Some x with a x = b, or None."""
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ContractError(f"solve shape mismatch {a.shape} vs {b.shape}")
    if rows == 0:
        return F.zeros(cols, b.shape[1])
    R, pivots = rref(F, np.concatenate([a, b], axis=1))
    if pivots and pivots[-1] >= cols:
        return None
    x = F.zeros(cols, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols:]
    return x


def complement_of(F: Field, sub: np.ndarray, n: int) -> np.ndarray:
    """Standard basis vectors extending the columns of sub to a basis of k^n.

    sub must have independent columns.
    """
    if sub.shape[0] != n:
        raise ContractError(f"complement: sub has {sub.shape[0]} rows, ambient {n}")
    if sub.shape[1] == 0:
        return F.eye(n)
    _, pivots = rref(F, sub.T)
    if len(pivots) != sub.shape[1]:
        raise ContractError("complement: columns of sub are dependent")
    rest = [i for i in range(n) if i not in set(pivots)]
    return F.eye(n)[:, rest].copy()


def inverse_of(F: Field, a: np.ndarray):
    """Inverse of a square matrix, or None if singular."""
    n = a.shape[0]
    if a.shape != (n, n):
        raise ContractError("inverse of non-square matrix")
    if n == 0:
        return F.zeros(0, 0)
    R, pivots = rref(F, np.concatenate([a, F.eye(n)], axis=1))
    if len(pivots) < n or pivots[n - 1] >= n:
        return None
    return R[:, n:].copy()


def left_inverse(F: Field, a: np.ndarray) -> np.ndarray:
    """Some L with L a = I for a of full column rank."""
    rows, cols = a.shape
    x = solve_of(F, a.T, F.eye(cols))
    if x is None:
        raise ContractError("left inverse of a rank-deficient matrix")
    return x.T.copy()


def coordinates(F: Field, basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coordinates of the columns of v in the independent columns of basis."""
    x = solve_of(F, basis, v)
    if x is None:
        raise ContractError("vector outside the given span")
    return x


def intersect(F: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Basis of the intersection of the column spans of a and b."""
    n = a.shape[0]
    if a.shape[1] == 0 or b.shape[1] == 0:
        return F.zeros(n, 0)
    K = kernel_of(F, np.concatenate([a, F.reduce(-b) if not F.is_rational else -b], axis=1))
    return image_of(F, F.matmul(a, K[: a.shape[1]]))


@dataclass(frozen=True, eq=False)
class Matrix:
    """A matrix tagged with its field."""

    field: Field
    data: np.ndarray

    @classmethod
    def of(cls, field: Field, rows) -> "Matrix":
        rows = list(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(field, field.array(rows, shape=(len(rows), ncols)) if rows else field.zeros(0, 0))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def _same(self, other: "Matrix"):
        if self.field != other.field:
            raise ContractError(f"mixed fields {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix(self.field, self.field.matmul(self.data, other.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.data.shape != other.data.shape:
            raise ContractError("shape mismatch in addition")
        return Matrix(self.field, self.field.add(self.data, other.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.field.equal(self.data, other.data)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format_scalar(x) for x in row) for row in self.data)
        return f"Matrix[{self.field}]({self.rows}x{self.cols}: {body})"


def rank(m: Matrix) -> int:
    return rank_of(m.field, m.data)


def kernel_basis(m: Matrix) -> Matrix:
    return Matrix(m.field, kernel_of(m.field, m.data))


def image_basis(m: Matrix) -> Matrix:
    return Matrix(m.field, image_of(m.field, m.data))


def solve(m: Matrix, b: Matrix):
    m._same(b)
    x = solve_of(m.field, m.data, b.data)
    return None if x is None else Matrix(m.field, x)


def complement_basis(sub: Matrix, ambient_dim: int) -> Matrix:
    return Matrix(sub.field, complement_of(sub.field, sub.data, ambient_dim))
