"""Seeded construction of point configurations and divisor members.

Everything is driven by a numpy ``Generator``; the same seed always gives
the same configuration.  Degenerate draws are retried a bounded number of
times and then reported with :class:`ResampleExhausted`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import FieldTooSmall, ResampleExhausted, UnsupportedField
from .field import Field
from .ideal import BettiTable, IdealHandle
from .ring import Form, ProjPoint, monomials, ndim, poly_matrix_det

log = logging.getLogger(__name__)

DEFAULT_RETRIES = 5


def triangular(r: int) -> int:
    return r * (r + 1) // 2


def tangential(r: int) -> int:
    return 2 * r * (r + 1)


def generic_triangular_betti(r: int) -> BettiTable:
    return BettiTable({r: r + 1}, {r + 1: r})


def generic_tangential_betti(r: int) -> BettiTable:
    return BettiTable({2 * r: r + 1}, {2 * r + 2: r})


def tangential_divisor_betti(r: int) -> BettiTable:
    """Shape of a general member of the tangential divisor D_r."""
    return BettiTable({2 * r: r + 1, 2 * r + 1: 1}, {2 * r + 1: 1, 2 * r + 2: r})


@dataclass
class SampleRequest:
    kind: str
    n: int | None = None
    curve_degree: int | None = None
    r: int | None = None
    seed: int = 0
    max_retries: int = DEFAULT_RETRIES

    KINDS = ("general-points", "points-on-curve", "triangular-divisor",
             "tangential-general", "tangential-divisor")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if self.kind in ("general-points", "points-on-curve") and (self.n is None or self.n < 1):
            raise ValueError("n must be >= 1")
        if self.kind == "points-on-curve" and (self.curve_degree is None or self.curve_degree < 1):
            raise ValueError("curve_degree must be >= 1")
        if self.kind in ("triangular-divisor", "tangential-general", "tangential-divisor") \
                and (self.r is None or self.r < 1):
            raise ValueError("r must be >= 1")


@dataclass
class SampleResult:
    handle: IdealHandle
    certificate: dict = dc_field(default_factory=dict)
    retries_used: int = 0
    extra: dict = dc_field(default_factory=dict)


def _require_prime_field(field: Field):
    if field.kind != "prime-field":
        raise UnsupportedField("sampling needs a prime field")


def _distinct_points(field: Field, n: int, rng) -> list[ProjPoint]:
    seen: dict[ProjPoint, None] = {}
    while len(seen) < n:
        seen.setdefault(ProjPoint.random(field, rng))
    return list(seen)


def _retrying(max_retries: int, what: str):
    """Yield attempt numbers 0..max_retries, raising once they run out."""
    for attempt in range(max_retries + 1):
        yield attempt
    raise ResampleExhausted(f"{what}: still degenerate after {max_retries} retries")


def sample_general_points(field: Field, n: int, rng, max_retries: int = DEFAULT_RETRIES) -> SampleResult:
    _require_prime_field(field)
    for attempt in _retrying(max_retries, f"{n} general points"):
        pts = _distinct_points(field, n, rng)
        handle = IdealHandle.from_points(field, pts)
        top = 0
        while ndim(top) < n:
            top += 1
        prof = handle.hilbert_profile(top + 2)
        expected = {d: min(ndim(d), n) for d in prof.values}
        if prof.values == expected:
            cert = {"hilbert_profile": dict(prof.values), "generic_profile": True}
            return SampleResult(handle, cert, attempt)
        log.debug("general points: non-generic profile, retrying")


def rational_points_on_curve(curve: Form, want: int, rng) -> list[ProjPoint]:
    """Affine points [a : y : 1] of V(curve), scanning lines x = a in random order.

    Stops once ``want`` points are found, so the cost is a few full line
    scans rather than all of P^2.
    """
    field = curve.field
    p = field.p
    ys = np.arange(p, dtype=np.int64) if field.dtype is not object else np.array(range(p), dtype=object)
    k = curve.degree
    mons = monomials(k)
    found: list[ProjPoint] = []
    tried: set[int] = set()
    while len(tried) < p:
        a = field.random_scalar(rng)
        if a in tried:
            continue
        tried.add(a)
        # restriction to x = a, z = 1: coefficient of y^b is sum_a' f_(a',b,c) a^a'
        coef = [0] * (k + 1)
        for (ea, eb, _), c in zip(mons, curve.coeffs):
            if c:
                coef[eb] = (coef[eb] + int(c) * pow(a, ea, p)) % p
        vals = np.zeros(p, dtype=ys.dtype)
        for b in range(k, -1, -1):
            vals = (vals * ys + coef[b]) % p
        for y in np.flatnonzero(vals == 0):
            found.append(ProjPoint.make(field, (a, int(y), 1)))
        if len(found) >= want:
            break
    return found


def sample_points_on_curve(field: Field, n: int, k: int, rng,
                           max_retries: int = DEFAULT_RETRIES) -> SampleResult:
    """n distinct rational points on one random curve of degree k."""
    _require_prime_field(field)
    if field.p <= 2 * n:
        raise FieldTooSmall(f"p = {field.p} is too small for {n} points on a curve")
    expected_h0 = ndim(k) - min(n, ndim(k) - 1)
    for attempt in _retrying(max_retries, f"{n} points on a degree-{k} curve"):
        curve = Form.random(field, k, rng)
        if curve.is_zero():
            continue
        cand = rational_points_on_curve(curve, 4 * n, rng)
        if len(cand) < n:
            continue
        chosen = [cand[i] for i in sorted(rng.choice(len(cand), size=n, replace=False))]
        handle = IdealHandle.from_points(field, chosen)
        on_curve = all(curve(pt) == 0 for pt in chosen)
        h0 = handle.h0(k)
        if on_curve and h0 == expected_h0:
            cert = {"on_curve": True, f"h0({k})": h0}
            return SampleResult(handle, cert, attempt, {"curve": curve})
        log.debug("points on curve: h0(%d) = %d, expected %d", k, h0, expected_h0)


def sample_triangular_divisor(field: Field, r: int, rng, max_retries: int = DEFAULT_RETRIES) -> SampleResult:
    """A member of D_{r-1}: d_r = r(r+1)/2 points on one curve of degree r-1."""
    if r < 2:
        raise ValueError("the triangular divisor needs r >= 2")
    return sample_points_on_curve(field, triangular(r), r - 1, rng, max_retries)


def hilbert_burch_pattern(r: int) -> tuple[list[int], list[int]]:
    """(generator degrees, syzygy degrees) of a general tangential divisor member."""
    return [2 * r] * (r + 1) + [2 * r + 1], [2 * r + 1] + [2 * r + 2] * r


def random_hilbert_burch_matrix(field: Field, r: int, rng) -> list[list[Form]]:
    """Random (r+2) x (r+1) matrix of forms; rows index generators, columns syzygies.

    Entry (i, j) has degree syz_j - gen_i.  The single degree-0 entry (last
    row, first column) is kept zero so the resolution stays minimal.
    """
    gens, syz = hilbert_burch_pattern(r)
    mat = []
    for i, gd in enumerate(gens):
        row = []
        for j, sd in enumerate(syz):
            e = sd - gd
            row.append(Form.zero(field, e) if e == 0 else Form.random(field, e, rng))
        mat.append(row)
    return mat


def maximal_minors(mat: list[list[Form]]) -> list[Form]:
    """Signed maximal minors g_i = (-1)^i det(mat without row i).

    With this sign convention sum_i g_i * mat[i][j] = 0 for every column j.
    """
    n = len(mat)
    out = []
    for i in range(n):
        sub = [mat[k] for k in range(n) if k != i]
        det = poly_matrix_det(sub)
        out.append(-det if i % 2 else det)
    return out


def check_minor_relation(mat, minors) -> bool:
    for j in range(len(mat[0])):
        acc = None
        for i, g in enumerate(minors):
            t = g * mat[i][j]
            acc = t if acc is None else acc + t
        if not acc.is_zero():
            return False
    return True


def sample_tangential_divisor(field: Field, r: int, rng, max_retries: int = DEFAULT_RETRIES) -> SampleResult:
    """A general member of the tangential divisor D_r via a Hilbert-Burch matrix."""
    _require_prime_field(field)
    if r < 1:
        raise ValueError("r must be >= 1")
    deg = tangential(r)
    expected = tangential_divisor_betti(r)
    for attempt in _retrying(max_retries, f"tangential divisor member, r={r}"):
        mat = random_hilbert_burch_matrix(field, r, rng)
        minors = maximal_minors(mat)
        if not check_minor_relation(mat, minors):
            raise AssertionError("Hilbert-Burch minors do not annihilate the matrix")
        if any(g.is_zero() for g in minors):
            continue
        handle = IdealHandle.from_generators(field, minors)
        prof = handle.hilbert_profile(2 * r + 3)
        if prof.stable_value != deg:
            continue
        betti = handle.betti_table()
        h0 = handle.h0(2 * (r + 1))
        if betti == expected and h0 == 5 * r + 6:
            cert = {"degree": deg, "betti": betti.as_dict(), f"h0({2 * (r + 1)})": h0}
            return SampleResult(handle, cert, attempt, {"matrix": mat})
        log.debug("tangential divisor: got %s, h0 %d", betti, h0)


def sample_tangential_general(field: Field, r: int, rng, max_retries: int = DEFAULT_RETRIES) -> SampleResult:
    res = sample_general_points(field, tangential(r), rng, max_retries)
    betti = res.handle.betti_table()
    res.certificate["betti"] = betti.as_dict()
    res.certificate["betti_generic"] = betti == generic_tangential_betti(r)
    return res


def draw(field: Field, request: SampleRequest) -> SampleResult:
    """Dispatch a :class:`SampleRequest` with a fresh generator seeded from it."""
    rng = np.random.default_rng(request.seed)
    kind = request.kind
    if kind == "general-points":
        return sample_general_points(field, request.n, rng, request.max_retries)
    if kind == "points-on-curve":
        return sample_points_on_curve(field, request.n, request.curve_degree, rng, request.max_retries)
    if kind == "triangular-divisor":
        return sample_triangular_divisor(field, request.r, rng, request.max_retries)
    if kind == "tangential-general":
        return sample_tangential_general(field, request.r, rng, request.max_retries)
    return sample_tangential_divisor(field, request.r, rng, request.max_retries)
