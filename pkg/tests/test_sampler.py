import pytest

from liaison_lab import sampler
from liaison_lab.errors import FieldTooSmall, ResampleExhausted, UnsupportedField
from liaison_lab.field import PrimeField, Rationals
from liaison_lab.ideal import BettiTable, IdealHandle
from liaison_lab.ring import ProjPoint, evaluate
from liaison_lab.sampler import (
    SampleRequest,
    check_minor_relation,
    draw,
    maximal_minors,
    random_hilbert_burch_matrix,
    sample_general_points,
    sample_points_on_curve,
    sample_tangential_divisor,
    sample_tangential_general,
    sample_triangular_divisor,
)

from oracles import naive_h0

F = PrimeField(31991)


def test_general_points_examples(rng):
    Z = sample_general_points(F, 6, rng).handle
    assert (Z.h0(2), Z.h0(3)) == (0, 4)
    assert sample_general_points(F, 1, rng).handle.h0(1) == 2
    Z = sample_general_points(F, 10, rng).handle
    assert Z.betti_table() == BettiTable({4: 5}, {5: 4})


def test_general_points_certificate(rng):
    res = sample_general_points(F, 9, rng)
    assert len(set(res.handle.points)) == 9
    assert res.certificate["generic_profile"]
    assert res.certificate["hilbert_profile"] == res.handle.hilbert_profile(5).values
    assert 0 <= res.retries_used <= sampler.DEFAULT_RETRIES


@pytest.mark.parametrize("n,k", [(6, 2), (10, 3), (3, 1), (15, 4)])
def test_points_on_curve(n, k, rng):
    res = sample_points_on_curve(F, n, k, rng)
    pts = res.handle.points
    assert len(set(pts)) == n
    assert all(evaluate(res.extra["curve"], p) == 0 for p in pts)
    assert res.handle.h0(k) == 1 == naive_h0([p.coords for p in pts], k, F.p)
    assert res.certificate[f"h0({k})"] == 1


def test_points_on_curve_guards(rng):
    with pytest.raises(FieldTooSmall):
        sample_points_on_curve(PrimeField(101), 51, 2, rng)
    with pytest.raises(UnsupportedField):
        sample_general_points(Rationals(), 3, rng)


def test_triangular_divisor(rng):
    for r in (3, 4):
        Z = sample_triangular_divisor(F, r, rng).handle
        assert len(Z.points) == r * (r + 1) // 2
        assert Z.h0(r - 1) == 1


@pytest.mark.parametrize("r,h0", [(1, 11), (2, 16), (3, 21)])
def test_tangential_divisor(r, h0, rng):
    res = sample_tangential_divisor(F, r, rng)
    Z = res.handle
    assert Z.h0(2 * (r + 1)) == h0 == 5 * r + 6
    assert Z.hilbert_profile(2 * r + 3).stable_value == 2 * r * (r + 1)
    assert Z.betti_table() == sampler.tangential_divisor_betti(r)
    assert res.certificate["betti"] == Z.betti_table().as_dict()


def test_tangential_divisor_r1_shape_matches_collinear_witness(rng):
    Z = sample_tangential_divisor(F, 1, rng).handle
    witness = IdealHandle.from_points(F, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
    assert Z.betti_table() == witness.betti_table() == BettiTable({2: 2, 3: 1}, {3: 1, 4: 1})


def test_hilbert_burch_minors_annihilate_matrix(rng):
    for r in (1, 2, 3):
        mat = random_hilbert_burch_matrix(F, r, rng)
        assert mat[-1][0].is_zero() and mat[-1][0].degree == 0
        minors = maximal_minors(mat)
        assert [g.degree for g in minors] == [2 * r] * (r + 1) + [2 * r + 1]
        assert check_minor_relation(mat, minors)
        broken = [row[:] for row in mat]
        broken[0][0] = broken[0][0] + broken[1][0] + broken[1][0]
        assert not check_minor_relation(broken, minors)


def test_tangential_general(rng):
    res = sample_tangential_general(F, 1, rng)
    assert res.handle.betti_table().beta1 == {4: 1}
    res = sample_tangential_general(F, 2, rng)
    Z = res.handle
    assert Z.betti_table().beta0 == {4: 3}
    assert Z.h0(5) == 9 == naive_h0([p.coords for p in Z.points], 5, F.p)
    assert res.certificate["betti_generic"]


@pytest.mark.parametrize("req", [
    SampleRequest("general-points", n=7, seed=11),
    SampleRequest("points-on-curve", n=6, curve_degree=2, seed=12),
    SampleRequest("triangular-divisor", r=3, seed=13),
    SampleRequest("tangential-general", r=1, seed=14),
    SampleRequest("tangential-divisor", r=2, seed=15),
])
def test_draw_is_deterministic(req):
    a, b = draw(F, req), draw(F, req)
    assert a.certificate == b.certificate and a.retries_used == b.retries_used
    if a.handle.kind == "points":
        assert a.handle.points == b.handle.points
    else:
        assert a.handle.generators == b.handle.generators
    other = draw(F, SampleRequest(req.kind, req.n, req.curve_degree, req.r, seed=req.seed + 1))
    if a.handle.kind == "points":
        assert other.handle.points != a.handle.points


def test_request_validation():
    with pytest.raises(ValueError):
        SampleRequest("general-points", n=0)
    with pytest.raises(ValueError):
        SampleRequest("tangential-divisor", r=0)
    with pytest.raises(ValueError):
        SampleRequest("banana")


def test_exhaustion_raises(monkeypatch, rng):
    # every draw lands on the line z = 0, so the profile is never generic
    def on_a_line(field, g):
        return ProjPoint.make(field, (int(g.integers(1, field.p)), 1, 0))
    monkeypatch.setattr(sampler.ProjPoint, "random", staticmethod(on_a_line))
    with pytest.raises(ResampleExhausted):
        sample_general_points(F, 5, rng, max_retries=2)
