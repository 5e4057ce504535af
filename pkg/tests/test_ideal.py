import pytest

from liaison_lab.errors import DegreeOutOfRange
from liaison_lab.field import PrimeField
from liaison_lab.ideal import (
    BettiTable,
    IdealHandle,
    complete_intersection_ideal,
    ideal_quotient_piece,
    is_complete_intersection,
    koszul_dim,
)
from liaison_lab.linalg import Subspace
from liaison_lab.ring import Form, GradedSubspace, ProjPoint, evaluate

from oracles import beta1_from_hilbert, ci_hilbert_codims, naive_h0

F = PrimeField(31991)
x, y, z = (Form.monomial(F, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
COLLINEAR4 = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)]


def conic_points(n, start=1):
    return [ProjPoint.make(F, (t * t, t, 1)) for t in range(start, start + n)]


def random_points(rng, n):
    pts = set()
    while len(pts) < n:
        pts.add(ProjPoint.random(F, rng))
    return list(pts)


def test_piece_examples(rng):
    assert IdealHandle.from_points(F, []).h0(3) == 10
    pts = random_points(rng, 6)
    Z = IdealHandle.from_points(F, pts)
    coords = [p.coords for p in pts]
    assert naive_h0(coords, 2, F.p) == 0 and naive_h0(coords, 3, F.p) == 4
    assert Z.h0(2) == 0 and Z.h0(3) == 4
    assert IdealHandle.from_points(F, conic_points(6)).h0(2) == 1


def test_piece_elements_vanish(rng):
    pts = random_points(rng, 7)
    Z = IdealHandle.from_points(F, pts)
    for f in Z.piece(3).forms():
        assert all(evaluate(f, p) == 0 for p in pts)


def test_h0_examples(rng):
    # ten general points: no cubic; ten points on a cubic: exactly one
    assert IdealHandle.from_points(F, random_points(rng, 10)).h0(3) == 0
    for r in range(2, 7):
        n = r * (r + 1) // 2
        assert IdealHandle.from_points(F, random_points(rng, n)).h0(r - 1) == 0


def test_h0_on_a_cubic():
    # the nodal cubic y^2 z = x^3 + x^2 z, parametrised by t -> (t^2-1, t(t^2-1), 1)
    pts = [ProjPoint.make(F, (t * t - 1, t * (t * t - 1), 1)) for t in range(2, 12)]
    cubic = y * y * z - x * x * x - x * x * z
    assert all(evaluate(cubic, p) == 0 for p in pts)
    Z = IdealHandle.from_points(F, pts)
    assert Z.h0(3) == 1 == naive_h0([p.coords for p in pts], 3, F.p)
    assert Z.piece(3) == GradedSubspace(3, Subspace.span(F, cubic.coeffs[None, :]))


def test_hilbert_profiles():
    prof = IdealHandle.from_points(F, conic_points(6)).hilbert_profile(7)
    expected = ci_hilbert_codims(2, 3, 7)
    assert prof.values == expected == {0: 1, 1: 3, 2: 5, 3: 6, 4: 6, 5: 6, 6: 6, 7: 6}
    assert prof.stable_value == 6
    assert set(IdealHandle.from_points(F, []).hilbert_profile(5).values.values()) == {0}


def test_ci_of_quartics_has_degree_16(rng):
    Z = IdealHandle.from_points(F, conic_points(6))
    q = Z.piece(4)
    J = complete_intersection_ideal(q.random_element(rng), q.random_element(rng))
    prof = J.hilbert_profile(11)
    assert prof.values == ci_hilbert_codims(4, 4, 11)
    assert prof.stable_value == 16


def test_profile_stabilises_at_point_count(rng):
    for n in (1, 3, 7, 12):
        Z = IdealHandle.from_points(F, random_points(rng, n))
        assert Z.hilbert_profile(Z.default_dmax()).stable_value == n


def test_minimal_generators_examples(rng):
    gens = IdealHandle.from_points(F, conic_points(6)).minimal_generators(4)
    assert [d for d, _ in gens] == [2, 3]
    for r in (2, 3, 4, 5):
        gens = IdealHandle.from_points(F, random_points(rng, r * (r + 1) // 2)).minimal_generators()
        assert [d for d, _ in gens] == [r] * (r + 1)
    unit = IdealHandle.unit(F).minimal_generators(3)
    assert [d for d, _ in unit] == [0]


def _check_betti_with_oracle(Z, table):
    coords = [p.coords for p in Z.points]
    d_max = Z.default_dmax() + 1
    dims = {d: naive_h0(coords, d, F.p) for d in range(d_max + 1)}
    assert beta1_from_hilbert(dims, table.beta0) == table.beta1


def test_betti_examples(rng):
    Z = IdealHandle.from_points(F, random_points(rng, 4))
    assert Z.betti_table() == BettiTable({2: 2}, {4: 1})
    Z = IdealHandle.from_points(F, conic_points(6))
    t = Z.betti_table()
    assert t == BettiTable({2: 1, 3: 1}, {5: 1})
    _check_betti_with_oracle(Z, t)
    Z = IdealHandle.from_points(F, COLLINEAR4)
    t = Z.betti_table()
    assert t == BettiTable({2: 2, 3: 1}, {3: 1, 4: 1})
    _check_betti_with_oracle(Z, t)


def test_collinear_syzygy_by_hand():
    # l = z vanishes on the three collinear points; m1, m2 span the lines through [0:0:1]
    Z = IdealHandle.from_points(F, COLLINEAR4)
    l, m1, m2 = z, x, y
    q1, q2 = l * m1, l * m2
    assert all(f.coeffs in Z.piece(2).space for f in (q1, q2))
    assert (m2 * q1 - m1 * q2).is_zero()


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_generic_triangular_betti(r, rng):
    Z = IdealHandle.from_points(F, random_points(rng, r * (r + 1) // 2))
    t = Z.betti_table()
    assert t == BettiTable({r: r + 1}, {r + 1: r})
    assert t.rank_defect == 1
    _check_betti_with_oracle(Z, t)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_generic_tangential_betti(r, rng):
    Z = IdealHandle.from_points(F, random_points(rng, 2 * r * (r + 1)))
    t = Z.betti_table()
    assert t == BettiTable({2 * r: r + 1}, {2 * r + 2: r})
    _check_betti_with_oracle(Z, t)


def test_betti_rank_identity_random_configurations(rng):
    for n in range(1, 16):
        Z = IdealHandle.from_points(F, random_points(rng, n))
        t = Z.betti_table()
        assert t.rank_defect == 1
        _check_betti_with_oracle(Z, t)


def test_from_pieces_window():
    Z = IdealHandle.from_points(F, conic_points(6))
    pieces = {d: Z.piece(d) for d in range(0, 6)}
    W = IdealHandle.from_pieces(F, pieces)
    assert W.betti_table() == BettiTable({2: 1, 3: 1}, {5: 1})
    with pytest.raises(DegreeOutOfRange):
        W.piece(6)
    # window starting at a nonzero piece: lower generators are unknowable
    partial = IdealHandle.from_pieces(F, {d: Z.piece(d) for d in range(3, 6)})
    with pytest.raises(DegreeOutOfRange):
        partial.minimal_generators(5)
    with pytest.raises(ValueError):
        IdealHandle.from_pieces(F, {2: Z.piece(2), 4: Z.piece(4)})


def test_quotient_examples(rng):
    Z = IdealHandle.from_points(F, conic_points(6))
    q = Z.piece(4)
    J = complete_intersection_ideal(q.random_element(rng), q.random_element(rng))
    for d in range(0, 7):
        assert ideal_quotient_piece(J, IdealHandle.unit(F), d) == J.piece(d)
        quotient = ideal_quotient_piece(J, Z, d)
        assert J.piece(d).space.issubspace(quotient.space)
    assert ideal_quotient_piece(J, Z, 3).dim == 1


def test_quotient_against_points(rng):
    # residual of 4 general points inside the CI of 4 other general points' conics
    pts = random_points(rng, 4)
    full = IdealHandle.from_points(F, pts)
    conics = full.piece(2)
    F1, G1 = conics.basis
    J = complete_intersection_ideal(Form(F, 2, F1), Form(F, 2, G1))
    Z = IdealHandle.from_points(F, pts[:1])
    for d in range(0, 5):
        got = ideal_quotient_piece(J, Z, d)
        assert got == IdealHandle.from_points(F, pts[1:]).piece(d)


def test_quotient_is_an_involution(rng):
    Z = IdealHandle.from_points(F, random_points(rng, 6))
    q = Z.piece(4)
    J = complete_intersection_ideal(q.random_element(rng), q.random_element(rng))
    res = IdealHandle.from_pieces(F, {d: ideal_quotient_piece(J, Z, d) for d in range(0, 8)})
    back = {d: ideal_quotient_piece(J, res, d) for d in range(0, 8)}
    assert all(back[d] == Z.piece(d) for d in back)


def test_complete_intersection_examples(rng):
    assert not is_complete_intersection(x * x, x * y)
    assert is_complete_intersection(x * x, y * y)
    for _ in range(5):
        q = IdealHandle.from_points(F, random_points(rng, 6)).piece(4)
        assert is_complete_intersection(q.random_element(rng), q.random_element(rng))
    # a common quadric factor
    h = Form.random(F, 2, rng)
    assert not is_complete_intersection(h * Form.random(F, 2, rng), h * Form.random(F, 2, rng))
    with pytest.raises(ValueError):
        is_complete_intersection(x, y * y)


def test_koszul_dims():
    for k in range(1, 6):
        J = complete_intersection_ideal(Form.monomial(F, (k, 0, 0)), Form.monomial(F, (0, k, 0)))
        for d in range(0, 2 * k + 3):
            assert J.h0(d) == koszul_dim(k, d)


def test_rationals_agree_with_prime_field():
    from liaison_lab.field import Rationals

    Q = Rationals()
    coords = [(t * t, t, 1) for t in range(1, 7)] + [(1, 0, 0), (2, 3, 5)]
    over_q = IdealHandle.from_points(Q, coords)
    over_p = IdealHandle.from_points(F, coords)
    assert over_q.betti_table() == over_p.betti_table()
    assert over_q.hilbert_profile(5).values == over_p.hilbert_profile(5).values


def test_concurrent_piece_access(rng):
    from concurrent.futures import ThreadPoolExecutor

    Z = IdealHandle.from_points(F, random_points(rng, 12))
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda d: Z.piece(d % 7), range(40)))
    assert all(got[i] == Z.piece(i % 7) for i in range(40))
