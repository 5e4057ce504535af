"""Dense exact linear algebra over a :class:`~liaison_lab.field.Field`.

Matrices are 2-d numpy arrays whose entries are canonical field elements.
Vectors are rows; a subspace is stored as the reduced row-echelon form of a
spanning set, so two subspaces are equal exactly when their bases are.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch
from .field import Field


def as_matrix(field: Field, m, cols: int | None = None) -> np.ndarray:
    arr = field.array(m)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, cols or 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def rref(field: Field, m: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form by Gauss-Jordan with first-nonzero pivoting.

    Returns ``(R, rank, pivot_cols)``; ``R`` has the same shape as ``m`` with
    the zero rows at the bottom.
    """
    a = np.array(m, dtype=field.dtype, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = field.inv(a[r, c])
        a[r, c:] = field.reduce(a[r, c:] * inv)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = field.reduce(a[hit, c:] - np.outer(col[hit], a[r, c:]))
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(field: Field, m: np.ndarray) -> int:
    return rref(field, m)[1]


def determinant(field: Field, m: np.ndarray):
    """Determinant of a square matrix as the signed product of elimination pivots."""
    a = np.array(m, dtype=field.dtype, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant needs a square matrix")
    det = field(1)
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return field(0)
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            det = field.neg(det)
        piv = a[c, c]
        det = field.mul(det, piv)
        inv = field.inv(piv)
        below = a[c + 1:, c] * inv
        a[c + 1:, c:] = field.reduce(a[c + 1:, c:] - np.outer(below, a[c, c:]))
    return det


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``field^ambient_dim`` held as an RREF basis (rows)."""

    field: Field
    ambient_dim: int
    basis: np.ndarray

    @classmethod
    def span(cls, field: Field, vectors, ambient_dim: int | None = None) -> "Subspace":
        m = np.asarray(vectors)
        if ambient_dim is None:
            ambient_dim = m.shape[1]
        if m.size == 0:
            return cls.zero(field, ambient_dim)
        m = m.reshape(-1, ambient_dim)
        r, k, _ = rref(field, m)
        basis = r[:k]
        basis.setflags(write=False)
        return cls(field, ambient_dim, basis)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        b = field.zeros((0, ambient_dim))
        b.setflags(write=False)
        return cls(field, ambient_dim, b)

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        b = field.zeros((ambient_dim, ambient_dim))
        b[np.arange(ambient_dim), np.arange(ambient_dim)] = field(1)
        b.setflags(write=False)
        return cls(field, ambient_dim, b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        return [int(np.flatnonzero(row)[0]) for row in self.basis]

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"{self.ambient_dim} != {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, np.vstack([self.basis, other.basis]), self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # rowspace(A) is cut out by the annihilator ker(A); stack both constraint sets
        constraints = np.vstack([self.annihilator().basis, other.annihilator().basis])
        return kernel_basis(self.field, constraints, self.ambient_dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.basis.shape == other.basis.shape
                and bool(np.all(self.basis == other.basis)))

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.basis.ravel().tolist())))

    def __contains__(self, vector) -> bool:
        v = np.asarray(vector).reshape(1, self.ambient_dim)
        return not self.reduce(v).any()

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return not other.reduce(self.basis).any()

    def annihilator(self) -> "Subspace":
        return kernel_basis(self.field, self.basis, self.ambient_dim)

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Normal form of each row modulo this subspace (zero iff the row lies in it)."""
        v = np.array(vectors, dtype=self.field.dtype, copy=True).reshape(-1, self.ambient_dim)
        if self.dim == 0 or v.shape[0] == 0:
            return v
        piv = self.pivots
        return self.field.reduce(v - self.field.matmul(v[:, piv], self.basis))

    def quotient_projection(self) -> tuple[list[int], np.ndarray]:
        """Coordinates on ``ambient / self``.

        Returns ``(free_cols, P)`` where ``v @ P`` gives the class of ``v`` in
        the quotient, in coordinates indexed by the non-pivot columns.
        """
        piv = self.pivots
        free = [c for c in range(self.ambient_dim) if c not in set(piv)]
        f = self.field
        proj = f.zeros((self.ambient_dim, len(free)))
        proj[free, np.arange(len(free))] = f(1)
        if piv:
            proj[piv, :] = f.reduce(-self.basis[:, free])
        return free, proj


def kernel_basis(field: Field, m: np.ndarray, cols: int | None = None) -> Subspace:
    """Right kernel ``{v : m v = 0}`` as a canonical subspace."""
    m = np.asarray(m)
    if cols is None:
        cols = m.shape[1]
    if m.size == 0:
        return Subspace.full(field, cols)
    r, k, piv = rref(field, m.reshape(-1, cols))
    free = [c for c in range(cols) if c not in set(piv)]
    if not free:
        return Subspace.zero(field, cols)
    vecs = field.zeros((len(free), cols))
    vecs[np.arange(len(free)), free] = field(1)
    if piv:
        vecs[:, piv] = field.reduce(-r[:k][:, free].T)
    return Subspace.span(field, vecs, cols)


def left_kernel(field: Field, m: np.ndarray, rows: int | None = None) -> Subspace:
    """``{v : v m = 0}``."""
    m = np.asarray(m)
    if rows is None:
        rows = m.shape[0]
    if m.ndim == 2 and m.shape[1] == 0:
        return Subspace.full(field, rows)
    return kernel_basis(field, m.T, rows)
