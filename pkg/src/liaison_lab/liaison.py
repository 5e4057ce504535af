"""Residuation of point schemes by complete intersections, and the verifiers
built on it.

Naming: the triangular family lives in degree d_r = r(r+1)/2 with divisor
``triangular-D(r-1)`` = {h0(I_Z(r-1)) = 1}; the tangential family lives in
degree 2r(r+1) with divisor ``tangential-D(r)`` = {mu_{2r} not surjective}.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import LiaisonLabError, NotAPointScheme, NotEnoughCurves, ResampleExhausted
from .field import Field
from .ideal import (
    BettiTable,
    IdealHandle,
    complete_intersection_ideal,
    ideal_quotient_piece,
    is_complete_intersection,
)
from .ring import Form
from .sampler import (
    DEFAULT_RETRIES,
    generic_tangential_betti,
    hilbert_burch_pattern,
    sample_general_points,
    sample_points_on_curve,
    sample_tangential_divisor,
    sample_tangential_general,
    sample_triangular_divisor,
    tangential,
    tangential_divisor_betti,
    triangular,
)

log = logging.getLogger(__name__)


def scheme_degree(Z: IdealHandle) -> int:
    """Degree of a saturated point ideal, read off its stabilised Hilbert function."""
    if Z.kind == "points":
        return len(Z.points)
    if Z.kind == "pieces":
        lo, hi = Z.window
        prof = Z.hilbert_profile(hi, max(lo, hi - 2))
    else:
        prof = Z.hilbert_profile(Z.default_dmax())
    if prof.stable_value is None:
        raise LiaisonLabError(f"Hilbert function has not stabilised: {prof}")
    return prof.stable_value


@dataclass
class LiaisonStep:
    k: int
    F: Form
    G: Form
    source: IdealHandle
    residual: IdealHandle
    degrees: tuple[int, int]
    ci_retries: int = 0

    @property
    def window(self) -> tuple[int, int]:
        return self.residual.window

    @property
    def degree_identity_holds(self) -> bool:
        return sum(self.degrees) == self.k * self.k


def residuate(Z: IdealHandle, k: int, rng, d_window: tuple[int, int] | None = None,
              max_retries: int = DEFAULT_RETRIES) -> LiaisonStep:
    """Link Z by two random degree-k curves through it and return the residual.

    The residual is stored as explicit pieces (J : I_Z)_d, J = (F, G), over
    ``d_window`` (default [k-2, k+3]).  The window is extended downwards
    until its lowest piece is zero so generators and syzygies are visible.
    """
    field = Z.field
    if Z.is_unit():
        raise NotAPointScheme("the unit ideal cannot be residuated")
    curves = Z.piece(k)
    if curves.dim < 2:
        raise NotEnoughCurves(f"h0(I_Z({k})) = {curves.dim} < 2")
    for attempt in range(max_retries + 1):
        F = curves.random_element(rng)
        G = curves.random_element(rng)
        if not F.is_zero() and not G.is_zero() and is_complete_intersection(F, G):
            break
    else:
        raise ResampleExhausted(f"no complete intersection of degree {k} after {max_retries} retries")

    J = complete_intersection_ideal(F, G)
    lo, hi = d_window if d_window is not None else (max(0, k - 2), k + 3)
    gens = Z.generator_forms()
    pieces = {d: ideal_quotient_piece(J, Z, d, gens) for d in range(lo, hi + 1)}
    while lo > 0 and pieces[lo].dim > 0:
        lo -= 1
        pieces[lo] = ideal_quotient_piece(J, Z, lo, gens)
    residual = IdealHandle.from_pieces(field, pieces)
    step = LiaisonStep(k, F, G, Z, residual, (scheme_degree(Z), scheme_degree(residual)), attempt)
    log.debug("residuated degree %d by CI(%d,%d): residual degree %d", step.degrees[0], k, k, step.degrees[1])
    return step


def relink(step: LiaisonStep) -> dict[int, object]:
    """Residuate the residual by the same (F, G); returns its pieces over the window."""
    J = complete_intersection_ideal(step.F, step.G)
    gens = step.residual.generator_forms()
    lo, hi = step.window
    return {d: ideal_quotient_piece(J, step.residual, d, gens) for d in range(lo, hi + 1)}


def involution_holds(step: LiaisonStep) -> bool:
    """Linking twice by the same complete intersection gives back the source."""
    back = relink(step)
    return all(back[d] == step.source.piece(d) for d in back)


def mu_surjective(Z: IdealHandle, d: int) -> bool:
    """Is H0(I_Z(d)) ⊗ H0(O(1)) -> H0(I_Z(d+1)) onto?"""
    return Z.linear_span(d + 1).dim == Z.h0(d + 1)


def mapping_cone_betti(gen_degrees, syz_degrees, k: int) -> BettiTable:
    """Betti table of the residual of a scheme in a CI(k, k), before any cancellation.

    Residual generators: the two curves of degree k together with 2k - s for
    each syzygy degree s of the source; residual syzygies: 2k - g for each
    generator degree g of the source.
    """
    beta0: dict[int, int] = {k: 2}
    for s in syz_degrees:
        beta0[2 * k - s] = beta0.get(2 * k - s, 0) + 1
    beta1: dict[int, int] = {}
    for g in gen_degrees:
        beta1[2 * k - g] = beta1.get(2 * k - g, 0) + 1
    return BettiTable(beta0, beta1)


def expected_residual_betti_tangential(r: int) -> BettiTable:
    if r < 1:
        raise ValueError("r must be >= 1")
    gens, syz = hilbert_burch_pattern(r)
    return mapping_cone_betti(gens, syz, 2 * (r + 1))


def grassmannian_pencils_dim(n: int) -> int:
    """dim G(2, n) = 2(n - 2)."""
    return 2 * (n - 2)


def dimension_identity_tangential(r: int) -> bool:
    """dim D_r + dim G(2, 5r+6) - dim G(2, r+2) == dim D_{r+1}, divisors of dimension 2d - 1."""
    if r < 1:
        raise ValueError("r must be >= 1")
    lhs = (2 * tangential(r) - 1) + grassmannian_pencils_dim(5 * r + 6) - grassmannian_pencils_dim(r + 2)
    return lhs == 2 * tangential(r + 1) - 1


def riemann_roch_correction(r: int) -> int:
    """deg((r-1)H) - deg(D) + 1 - g(X) for X a plane curve of degree r+1 and deg D = d_r."""
    return (r - 1) * (r + 1) - triangular(r) + 1 - r * (r - 1) // 2


def riemann_roch_ledger(r: int) -> bool:
    if r < 2:
        raise ValueError("r must be >= 2")
    return riemann_roch_correction(r) == 0


# ---------------------------------------------------------------- verifiers

@dataclass
class TrialOutcome:
    ok: bool
    ledger: dict = dc_field(default_factory=dict)
    detail: str = ""


@dataclass
class VerificationReport:
    theorem: str
    r: int
    trials: int = 0
    passes: int = 0
    failures: list[dict] = dc_field(default_factory=list)
    h0_ledger: list[dict] = dc_field(default_factory=list)
    wall_time: float = 0.0

    def add(self, trial: int, seed: int, outcome: TrialOutcome):
        self.trials += 1
        self.h0_ledger.append({"trial": trial, **outcome.ledger})
        if outcome.ok:
            self.passes += 1
        else:
            self.failures.append({"trial": trial, "seed": seed, "detail": outcome.detail})

    @property
    def all_passed(self) -> bool:
        return self.trials > 0 and self.passes == self.trials

    def as_dict(self) -> dict:
        return {"theorem": self.theorem, "r": self.r, "trials": self.trials, "passes": self.passes,
                "failures": self.failures, "h0_ledger": self.h0_ledger, "wall_time": self.wall_time}


def _problems(**checks) -> str:
    return "; ".join(name for name, ok in checks.items() if not ok)


def trial_lemma1(field: Field, r: int, rng, variant: str = "divisor") -> TrialOutcome:
    if variant == "divisor":
        Z = sample_triangular_divisor(field, r, rng).handle
        expected = (1, 1)
    elif variant == "general":
        Z = sample_general_points(field, triangular(r), rng).handle
        expected = (0, 0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    step = residuate(Z, r + 1, rng)
    pair = (Z.h0(r - 1), step.residual.h0(r))
    inv = involution_holds(step)
    ledger = {"h0_source": pair[0], "h0_residual": pair[1], "residual_degree": step.degrees[1],
              "involution": inv}
    bad = _problems(equality=pair[0] == pair[1], expected_pair=pair == expected,
                    degree_identity=step.degree_identity_holds, involution=inv)
    return TrialOutcome(not bad, ledger, f"h0 pair {pair}: {bad}" if bad else "")


def trial_corollary_triangular(field: Field, r: int, rng, direction: str = "forward") -> TrialOutcome:
    if direction == "forward":
        Z = sample_triangular_divisor(field, r, rng).handle
        twist = r
    elif direction == "backward":
        Z = sample_points_on_curve(field, triangular(r + 1), r, rng).handle
        twist = r - 1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    step = residuate(Z, r + 1, rng)
    h0 = step.residual.h0(twist)
    deg_ok = step.degrees[1] == (r + 1) ** 2 - scheme_degree(Z)
    inv = involution_holds(step)
    source_twist = r - 1 if direction == "forward" else r
    ledger = {"h0_source": Z.h0(source_twist), "h0_residual": h0, "residual_degree": step.degrees[1], "involution": inv}
    bad = _problems(membership=h0 == 1, residual_degree=deg_ok, involution=inv)
    return TrialOutcome(not bad, ledger, f"h0({twist}) = {h0}: {bad}" if bad else "")


def trial_prop_tangential(field: Field, r: int, rng) -> TrialOutcome:
    Z = sample_tangential_divisor(field, r, rng).handle
    k = 2 * (r + 1)
    step = residuate(Z, k, rng)
    res = step.residual
    betti = res.betti_table()
    pair = (Z.h0(k), res.h0(k))
    mu = mu_surjective(res, k)
    inv = involution_holds(step)
    ledger = {"h0_source": pair[0], "h0_residual": pair[1], "residual_degree": step.degrees[1],
              "residual_betti": betti.as_dict(), "mu_surjective": mu, "involution": inv}
    bad = _problems(residual_degree=step.degrees[1] == tangential(r + 1),
                    betti=betti == expected_residual_betti_tangential(r),
                    h0_pair=pair == (5 * r + 6, r + 2), mu_not_surjective=not mu, involution=inv)
    return TrialOutcome(not bad, ledger, f"betti {betti}, h0 {pair}: {bad}" if bad else "")


def trial_tangential_contrast(field: Field, r: int, rng) -> TrialOutcome:
    """General (non-divisor) source: the residual keeps the generic shape."""
    Z = sample_general_points(field, tangential(r), rng).handle
    step = residuate(Z, 2 * (r + 1), rng)
    betti = step.residual.betti_table()
    mu = mu_surjective(step.residual, 2 * (r + 1))
    inv = involution_holds(step)
    ledger = {"residual_degree": step.degrees[1], "residual_betti": betti.as_dict(),
              "mu_surjective": mu, "involution": inv}
    bad = _problems(betti=betti == generic_tangential_betti(r + 1), mu_surjective=mu,
                    residual_degree=step.degrees[1] == tangential(r + 1), involution=inv)
    return TrialOutcome(not bad, ledger, f"betti {betti}: {bad}" if bad else "")


def trial_resolution_triangular(field: Field, r: int, rng) -> TrialOutcome:
    res = sample_general_points(field, triangular(r), rng)
    betti = res.handle.betti_table()
    ok = betti == BettiTable({r: r + 1}, {r + 1: r})
    return TrialOutcome(ok, {"betti": betti.as_dict(), "retries": res.retries_used}, "" if ok else str(betti))


def trial_resolution_tangential(field: Field, r: int, rng) -> TrialOutcome:
    res = sample_tangential_general(field, r, rng)
    betti = res.handle.betti_table()
    mu = mu_surjective(res.handle, 2 * r)
    ok = betti == generic_tangential_betti(r) and mu
    return TrialOutcome(ok, {"betti": betti.as_dict(), "mu_surjective": mu, "retries": res.retries_used},
                        "" if ok else f"{betti}, mu surjective {mu}")


def trial_divisor_shape_tangential(field: Field, r: int, rng) -> TrialOutcome:
    """Betti shape and mu-criterion agree on tangential divisor members."""
    res = sample_tangential_divisor(field, r, rng)
    betti = res.handle.betti_table()
    mu = mu_surjective(res.handle, 2 * r)
    ok = betti == tangential_divisor_betti(r) and not mu
    return TrialOutcome(ok, {"betti": betti.as_dict(), "mu_surjective": mu, "retries": res.retries_used},
                        "" if ok else f"{betti}, mu surjective {mu}")


def _run(theorem: str, fn: Callable, r: int, rng, trials: int, **kw) -> VerificationReport:
    report = VerificationReport(theorem, r)
    start = time.perf_counter()
    for t in range(trials):
        seed = int(rng.integers(0, 2**63 - 1))
        try:
            outcome = fn(np.random.default_rng(seed), **kw)
        except LiaisonLabError as exc:
            outcome = TrialOutcome(False, {}, f"{type(exc).__name__}: {exc}")
        report.add(t, seed, outcome)
    report.wall_time = time.perf_counter() - start
    return report


def verify_lemma1(field: Field, r: int, variant: str, rng, trials: int = 1) -> VerificationReport:
    if r < 3:
        raise ValueError("r must be >= 3")
    return _run(f"lemma1-{variant}", lambda g: trial_lemma1(field, r, g, variant), r, rng, trials)


def verify_corollary_triangular(field: Field, r: int, direction: str, rng, trials: int = 1) -> VerificationReport:
    if r < 3:
        raise ValueError("r must be >= 3")
    return _run(f"corollary-{direction}", lambda g: trial_corollary_triangular(field, r, g, direction),
                r, rng, trials)


def verify_prop_tangential(field: Field, r: int, rng, trials: int = 1) -> VerificationReport:
    if r < 1:
        raise ValueError("r must be >= 1")
    return _run("prop-tangential", lambda g: trial_prop_tangential(field, r, g), r, rng, trials)
