"""The graded ring S = k[x, y, z].

Degree-d monomials x^a y^b z^c are ordered lexicographically descending on
(a, b): for d = 2 the order is x^2, xy, xz, y^2, yz, z^2.  Every coefficient
vector and every canonical basis in the package uses this order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import InconsistentDegrees
from .field import Field
from .linalg import Subspace

VARS = ("x", "y", "z")


def ndim(d: int) -> int:
    """dim S_d = C(d+2, 2), and 0 for negative d."""
    return comb(d + 2, 2) if d >= 0 else 0


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    if d < 0:
        return ()
    return tuple((a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


def monomial_index(a, b, c):
    """Position of x^a y^b z^c in the degree a+b+c basis (vectorised over arrays)."""
    m = b + c
    return m * (m + 1) // 2 + (m - b)


@lru_cache(maxsize=None)
def exponent_arrays(d: int) -> np.ndarray:
    return np.array(monomials(d), dtype=np.int64).reshape(-1, 3)


@lru_cache(maxsize=None)
def product_index(d: int, e: int) -> np.ndarray:
    """``out[i, j]`` is the index in degree d+e of monomial_i(d) * monomial_j(e)."""
    s = exponent_arrays(d)[:, None, :] + exponent_arrays(e)[None, :, :]
    idx = monomial_index(s[..., 0], s[..., 1], s[..., 2])
    idx.setflags(write=False)
    return idx


def multiplication_matrix(field: Field, coeffs: np.ndarray, e: int, d: int) -> np.ndarray:
    """Matrix of h -> h*f from S_d to S_{d+e}, acting on row vectors."""
    n, m = ndim(d), ndim(d + e)
    out = field.zeros((n, m))
    if n == 0:
        return out
    idx = product_index(d, e)
    out[np.arange(n)[:, None], idx] = np.asarray(coeffs)[None, :]
    return out


def block_multiplication_matrix(field: Field, coeffs: np.ndarray, e: int,
                                block_degrees: list[int]) -> np.ndarray:
    """Block-diagonal multiplication by f on ⊕ S_{d_i} -> ⊕ S_{d_i + e}."""
    blocks = [multiplication_matrix(field, coeffs, e, d) for d in block_degrees]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


@dataclass(frozen=True, eq=False)
class Form:
    """A homogeneous polynomial of a fixed degree, as a coefficient vector."""

    field: Field
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.field.reduce(np.asarray(self.coeffs, dtype=self.field.dtype)).reshape(-1)
        if c.shape[0] != ndim(self.degree):
            raise ValueError(f"degree {self.degree} needs {ndim(self.degree)} coefficients, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, field: Field, degree: int) -> "Form":
        return cls(field, degree, field.zeros(ndim(degree)))

    @classmethod
    def constant(cls, field: Field, value=1) -> "Form":
        return cls(field, 0, field.array([field(value)]))

    @classmethod
    def monomial(cls, field: Field, exps, coeff=1) -> "Form":
        d = sum(exps)
        f = field.zeros(ndim(d))
        f[monomial_index(*exps)] = field(coeff)
        return cls(field, d, f)

    @classmethod
    def from_dict(cls, field: Field, terms: dict) -> "Form":
        """Build from ``{(a, b, c): coeff}``; all exponents must share one degree."""
        degrees = {sum(k) for k in terms}
        if len(degrees) != 1:
            raise ValueError("terms must be homogeneous and non-empty")
        d = degrees.pop()
        f = field.zeros(ndim(d))
        for exps, v in terms.items():
            i = monomial_index(*exps)
            f[i] = field.add(f[i], v)
        return cls(field, d, f)

    @classmethod
    def random(cls, field: Field, degree: int, rng) -> "Form":
        return cls(field, degree, field.random_array(rng, ndim(degree)))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def terms(self) -> dict:
        return {m: self.coeffs[i] for i, m in enumerate(monomials(self.degree)) if self.coeffs[i]}

    def _same(self, other: "Form"):
        if other.degree != self.degree:
            raise InconsistentDegrees(f"cannot add degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        self._same(other)
        return Form(self.field, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "Form") -> "Form":
        self._same(other)
        return Form(self.field, self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "Form":
        return Form(self.field, self.degree, -self.coeffs)

    def scale(self, c) -> "Form":
        return Form(self.field, self.degree, self.coeffs * self.field(c))

    def __mul__(self, other):
        if isinstance(other, Form):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((self.degree, tuple(self.coeffs.tolist())))

    def __call__(self, pt) -> object:
        return evaluate(self, pt)

    def __repr__(self):
        parts = []
        for (a, b, c), v in self.terms().items():
            mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(VARS, (a, b, c)) if k)
            parts.append(f"{v}*{mono}" if mono else f"{v}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^2, normalised so the last nonzero coordinate is 1."""

    coords: tuple

    @classmethod
    def make(cls, field: Field, coords) -> "ProjPoint":
        c = [field(v) for v in coords]
        if len(c) != 3:
            raise ValueError("a point of P^2 needs three coordinates")
        nonzero = [i for i, v in enumerate(c) if v != 0]
        if not nonzero:
            raise ValueError("[0:0:0] is not a point")
        inv = field.inv(c[nonzero[-1]])
        return cls(tuple(field.mul(v, inv) for v in c))

    @classmethod
    def random(cls, field: Field, rng) -> "ProjPoint":
        while True:
            c = [field.random_scalar(rng) for _ in range(3)]
            if any(c):
                return cls.make(field, c)


@dataclass(frozen=True, eq=True)
class GradedSubspace:
    """A subspace of S_d."""

    degree: int
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != ndim(self.degree):
            raise ValueError("ambient dimension does not match the degree")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> np.ndarray:
        return self.space.basis

    def forms(self) -> list[Form]:
        return [Form(self.space.field, self.degree, row) for row in self.basis]

    def random_element(self, rng) -> Form:
        f = self.space.field
        w = f.random_array(rng, self.dim)
        return Form(f, self.degree, f.matmul(w[None, :], self.basis)[0] if self.dim else f.zeros(ndim(self.degree)))


def evaluation_matrix(field: Field, points, d: int) -> np.ndarray:
    """Rows are points, columns the degree-d monomials evaluated there."""
    exps = exponent_arrays(d)
    n = len(points)
    if n == 0:
        return field.zeros((0, ndim(d)))
    coords = field.array([list(pt.coords) for pt in points])
    powers = field.zeros((n, 3, d + 1))
    powers[:, :, 0] = field(1)
    for k in range(1, d + 1):
        powers[:, :, k] = field.reduce(powers[:, :, k - 1] * coords)
    px = powers[:, 0, :][:, exps[:, 0]]
    py = powers[:, 1, :][:, exps[:, 1]]
    pz = powers[:, 2, :][:, exps[:, 2]]
    return field.reduce(field.reduce(px * py) * pz)


def evaluate(f: Form, pt) -> object:
    """Value of ``f`` at a point (a :class:`ProjPoint` or a raw coordinate triple)."""
    field = f.field
    coords = pt.coords if isinstance(pt, ProjPoint) else tuple(field(v) for v in pt)
    row = evaluation_matrix(field, [ProjPoint(coords)], f.degree)[0]
    return field(field.matmul(row[None, :], f.coeffs[:, None])[0, 0])


def multiply(f: Form, g: Form) -> Form:
    field = f.field
    m = multiplication_matrix(field, g.coeffs, g.degree, f.degree)
    return Form(field, f.degree + g.degree, field.matmul(f.coeffs[None, :], m)[0])


def variable_images(field: Field, basis: np.ndarray, d: int) -> np.ndarray:
    """Stack x*V, y*V, z*V for the rows V of ``basis`` in S_d."""
    mats = [multiplication_matrix(field, Form.monomial(field, e).coeffs, 1, d)
            for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    if basis.shape[0] == 0:
        return field.zeros((0, ndim(d + 1)))
    return np.vstack([field.matmul(basis, m) for m in mats])


def _degree_shifts(deg):
    """Find u, v with deg[i][j] = u[i] + v[j], or raise."""
    n = len(deg)
    u = [deg[i][0] - deg[0][0] for i in range(n)]
    v = [deg[0][j] for j in range(n)]
    for i in range(n):
        for j in range(n):
            if deg[i][j] != u[i] + v[j]:
                raise InconsistentDegrees(f"entry ({i},{j}) has degree {deg[i][j]}, expected {u[i] + v[j]}")
    return u, v


def poly_matrix_det(m, entry_degrees=None) -> Form:
    """Determinant of a square matrix of forms, by cofactor expansion.

    ``entry_degrees[i][j]`` is the degree of entry (i, j); zero forms are
    allowed anywhere as long as they carry that degree.  The grid must be of
    the shape u_i + v_j so the determinant is homogeneous.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if entry_degrees is None:
        entry_degrees = [[e.degree for e in row] for row in m]
    for i in range(n):
        for j in range(n):
            if m[i][j].degree != entry_degrees[i][j]:
                raise InconsistentDegrees(f"entry ({i},{j}) is not of degree {entry_degrees[i][j]}")
    u, v = _degree_shifts(entry_degrees)
    total = sum(u) + sum(v)
    if total < 0:
        raise InconsistentDegrees("determinant would have negative degree")
    field = m[0][0].field

    # Laplace expansion along rows, memoised on the set of used columns
    memo: dict[tuple[int, frozenset], Form] = {}

    def expand(row: int, cols: frozenset) -> Form:
        if row == n:
            return Form.constant(field, 1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        free = [c for c in range(n) if c not in cols]
        deg = sum(u[row:]) + sum(v[c] for c in free)
        acc = Form.zero(field, deg)
        for pos, c in enumerate(free):
            entry = m[row][c]
            if entry.is_zero():
                continue
            term = multiply(entry, expand(row + 1, cols | {c}))
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return expand(0, frozenset())
