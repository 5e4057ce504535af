"""Homogeneous ideals of k[x, y, z], handled one graded piece at a time.

No Groebner bases: every ideal here has known generation degrees, so each
question reduces to linear algebra inside a single S_d.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import DegreeOutOfRange, NotAPointScheme
from .field import Field
from .linalg import Subspace, kernel_basis, left_kernel
from .ring import (
    Form,
    GradedSubspace,
    ProjPoint,
    block_multiplication_matrix,
    evaluation_matrix,
    multiplication_matrix,
    ndim,
    variable_images,
)


@dataclass
class BettiTable:
    """Graded ranks of a length-2 resolution: generators and first syzygies."""

    beta0: dict[int, int]
    beta1: dict[int, int]

    def __post_init__(self):
        self.beta0 = {int(d): int(n) for d, n in sorted(self.beta0.items()) if n}
        self.beta1 = {int(d): int(n) for d, n in sorted(self.beta1.items()) if n}

    @property
    def rank_defect(self) -> int:
        """sum(beta0) - sum(beta1); equals 1 for every ideal of points."""
        return sum(self.beta0.values()) - sum(self.beta1.values())

    def as_dict(self) -> dict:
        return {"beta0": {str(k): v for k, v in self.beta0.items()},
                "beta1": {str(k): v for k, v in self.beta1.items()}}

    def __str__(self):
        return f"beta0={self.beta0} beta1={self.beta1}"


@dataclass
class HilbertProfile:
    values: dict[int, int]
    stable_value: int | None = None

    def __str__(self):
        s = " ".join(str(v) for _, v in sorted(self.values.items()))
        return f"codims [{s}]" + (f" stable {self.stable_value}" if self.stable_value is not None else "")


class IdealHandle:
    """A homogeneous ideal given by points, by generators or by explicit pieces.

    Pieces are memoised per degree; the cache is guarded by a lock so one
    handle may be shared between threads.
    """

    def __init__(self, field: Field, kind: str, data):
        self.field = field
        self.kind = kind
        self._data = data
        self._memo: dict[int, GradedSubspace] = {}
        self._gens: list[Form] | None = None
        self._proj: dict[int, np.ndarray] = {}
        self._lock = threading.RLock()

    @classmethod
    def from_points(cls, field: Field, points) -> "IdealHandle":
        pts = [p if isinstance(p, ProjPoint) else ProjPoint.make(field, p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        return cls(field, "points", tuple(pts))

    @classmethod
    def from_generators(cls, field: Field, forms) -> "IdealHandle":
        forms = tuple(forms)
        if any(f.is_zero() for f in forms):
            raise ValueError("generators must be nonzero")
        return cls(field, "generators", forms)

    @classmethod
    def from_pieces(cls, field: Field, pieces: dict[int, GradedSubspace]) -> "IdealHandle":
        degs = sorted(pieces)
        if degs != list(range(degs[0], degs[-1] + 1)):
            raise ValueError("pieces must cover a contiguous degree range")
        h = cls(field, "pieces", dict(pieces))
        h._memo.update(pieces)
        return h

    @classmethod
    def unit(cls, field: Field) -> "IdealHandle":
        return cls.from_generators(field, [Form.constant(field, 1)])

    @property
    def points(self) -> tuple:
        if self.kind != "points":
            raise AttributeError("only point ideals carry points")
        return self._data

    @property
    def generators(self) -> tuple:
        if self.kind != "generators":
            raise AttributeError("only generator ideals carry generators")
        return self._data

    @property
    def window(self) -> tuple[int, int] | None:
        if self.kind != "pieces":
            return None
        degs = sorted(self._data)
        return degs[0], degs[-1]

    def __repr__(self):
        if self.kind == "points":
            return f"IdealHandle(points={len(self._data)})"
        if self.kind == "generators":
            return f"IdealHandle(generators={[f.degree for f in self._data]})"
        return f"IdealHandle(pieces={self.window})"

    # ------------------------------------------------------------------ pieces
    def piece(self, d: int) -> GradedSubspace:
        if d < 0:
            raise DegreeOutOfRange(f"negative degree {d}")
        with self._lock:
            got = self._memo.get(d)
            if got is not None:
                return got
            if self.kind == "pieces":
                lo, hi = self.window
                raise DegreeOutOfRange(f"degree {d} outside stored window [{lo}, {hi}]")
            space = self._compute_piece(d)
            gs = GradedSubspace(d, space)
            self._memo[d] = gs
            return gs

    def _compute_piece(self, d: int) -> Subspace:
        f = self.field
        if self.kind == "points":
            return kernel_basis(f, evaluation_matrix(f, self._data, d), ndim(d))
        rows = [multiplication_matrix(f, g.coeffs, g.degree, d - g.degree)
                for g in self._data if g.degree <= d]
        if not rows:
            return Subspace.zero(f, ndim(d))
        return Subspace.span(f, np.vstack(rows), ndim(d))

    def has_piece(self, d: int) -> bool:
        if self.kind != "pieces":
            return d >= 0
        lo, hi = self.window
        return lo <= d <= hi

    def quotient_projection(self, d: int) -> np.ndarray:
        """Matrix sending v in S_d to its class in S_d / piece(d)."""
        with self._lock:
            if d not in self._proj:
                self._proj[d] = self.piece(d).space.quotient_projection()[1]
            return self._proj[d]

    def h0(self, d: int) -> int:
        return self.piece(d).dim

    def linear_span(self, d: int) -> Subspace:
        """S_1 * piece(d-1) inside S_d."""
        if d <= 0:
            return Subspace.zero(self.field, ndim(d))
        prev = self.piece(d - 1)
        return Subspace.span(self.field, variable_images(self.field, prev.basis, d - 1), ndim(d))

    def hilbert_profile(self, d_max: int, d_min: int = 0) -> HilbertProfile:
        values = {d: ndim(d) - self.h0(d) for d in range(d_min, d_max + 1)}
        stable = None
        tail = [values[d] for d in range(max(d_min, d_max - 2), d_max + 1)]
        if len(tail) == 3 and len(set(tail)) == 1:
            stable = tail[0]
        return HilbertProfile(values, stable)

    def is_unit(self) -> bool:
        return self.h0(0) == 1

    def regularity_index(self) -> int:
        """Smallest d from which the Hilbert function equals the degree (point ideals only)."""
        if self.kind != "points":
            raise NotAPointScheme("regularity index is only read off directly for point ideals")
        n = len(self._data)
        d = 0
        while ndim(d) - self.h0(d) < n:
            d += 1
        return d

    def default_dmax(self) -> int:
        """A degree through which all minimal generators and syzygies live."""
        if self.kind == "points":
            # generators in degree <= sigma+1, syzygies in degree <= sigma+2
            return self.regularity_index() + 2
        if self.kind == "generators":
            return max(g.degree for g in self._data) + 2
        return self.window[1]

    def _lowest_degree(self) -> int:
        if self.kind != "pieces":
            return 0
        lo, hi = self.window
        if lo > 0 and self.h0(lo) > 0:
            raise DegreeOutOfRange(
                f"piece {lo} is nonzero and lower pieces are unknown; extend the window down")
        return lo

    # ------------------------------------------------------------ generators
    def minimal_generators(self, d_max: int | None = None) -> list[tuple[int, Form]]:
        if d_max is None:
            d_max = self.default_dmax()
        if not self.has_piece(d_max):
            raise DegreeOutOfRange(f"degree {d_max} is not available")
        out = []
        for d in range(self._lowest_degree(), d_max + 1):
            piece = self.piece(d)
            if piece.dim == 0:
                continue
            lower = self.linear_span(d) if d > self._lowest_degree() else Subspace.zero(self.field, ndim(d))
            if lower.dim == piece.dim:
                continue
            extra = Subspace.span(self.field, lower.reduce(piece.basis), ndim(d))
            out.extend((d, Form(self.field, d, row)) for row in extra.basis)
        return out

    def generator_forms(self) -> list[Form]:
        """Minimal generators over the default window, cached."""
        with self._lock:
            if self._gens is None:
                self._gens = [g for _, g in self.minimal_generators()]
            return self._gens

    def syzygies(self, d: int, gens: list[Form]) -> Subspace:
        """Syz_d: kernel of ⊕ S_{d - deg g_i} -> S_d, (h_i) -> Σ h_i g_i."""
        f = self.field
        blocks = [multiplication_matrix(f, g.coeffs, g.degree, d - g.degree) for g in gens]
        rows = sum(b.shape[0] for b in blocks)
        if rows == 0:
            return Subspace.zero(f, 0)
        return left_kernel(f, np.vstack(blocks), rows)

    def betti_table(self, d_max: int | None = None) -> BettiTable:
        if d_max is None:
            d_max = self.default_dmax()
        gens = self.minimal_generators(d_max)
        forms = [g for _, g in gens]
        beta0: dict[int, int] = {}
        for d, _ in gens:
            beta0[d] = beta0.get(d, 0) + 1
        beta1: dict[int, int] = {}
        f = self.field
        prev = None
        for d in range(self._lowest_degree(), d_max + 1):
            syz = self.syzygies(d, forms)
            if prev is not None and prev.dim:
                shifts = [d - 1 - g.degree for g in forms]
                images = [f.matmul(prev.basis, block_multiplication_matrix(f, Form.monomial(f, e).coeffs, 1, shifts))
                          for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
                lower = Subspace.span(f, np.vstack(images), syz.ambient_dim).dim
            else:
                lower = 0
            if syz.dim - lower:
                beta1[d] = syz.dim - lower
            prev = syz
        return BettiTable(beta0, beta1)


def complete_intersection_ideal(F: Form, G: Form) -> IdealHandle:
    return IdealHandle.from_generators(F.field, [F, G])


def ideal_quotient_piece(J: IdealHandle, I: IdealHandle, d: int, gens: list[Form] | None = None) -> GradedSubspace:
    """(J : I)_d = {h in S_d : h f_i in J for every minimal generator f_i of I}."""
    f = J.field
    if gens is None:
        gens = I.generator_forms()
    blocks = []
    for g in gens:
        D = d + g.degree
        if not J.has_piece(D):
            raise DegreeOutOfRange(f"J is not available in degree {D}")
        mult = multiplication_matrix(f, g.coeffs, g.degree, d)
        blocks.append(f.matmul(mult, J.quotient_projection(D)))
    constraints = np.hstack(blocks) if blocks else f.zeros((ndim(d), 0))
    return GradedSubspace(d, left_kernel(f, constraints, ndim(d)))


def koszul_dim(k: int, d: int) -> int:
    """dim (F, G)_d for a complete intersection of two degree-k forms."""
    return 2 * ndim(d - k) - ndim(d - 2 * k)


def is_complete_intersection(F: Form, G: Form) -> bool:
    """True iff F and G (same degree k) share no common factor.

    Compares dim (F, G)_d with the Koszul count at d = 2k and 2k + 1; a common
    component strictly lowers the dimension.
    """
    if F.degree != G.degree or F.degree < 1 or F.is_zero() or G.is_zero():
        raise ValueError("need two nonzero forms of the same positive degree")
    k = F.degree
    J = complete_intersection_ideal(F, G)
    return all(J.h0(d) == koszul_dim(k, d) for d in (2 * k, 2 * k + 1))
