"""Experiment runner: seeded suites of verifier trials and their reports."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np

from . import __version__
from .errors import ConfigInvalid, LiaisonLabError
from .field import DEFAULT_PRIME, PrimeField, is_prime
from .liaison import (
    TrialOutcome,
    VerificationReport,
    dimension_identity_tangential,
    riemann_roch_correction,
    riemann_roch_ledger,
    trial_corollary_triangular,
    trial_divisor_shape_tangential,
    trial_lemma1,
    trial_prop_tangential,
    trial_resolution_tangential,
    trial_resolution_triangular,
    trial_tangential_contrast,
)

SCHEMA = "liaison-lab/1"
SUITES = ("triangular", "tangential", "identities")
DEFAULT_RANGES = {"triangular": (3, 6), "tangential": (1, 3), "identities": (1, 20)}
SUPPORTED_RANGES = {"triangular": (3, 8), "tangential": (1, 4), "identities": (1, 200)}

# (theorem id, suite, minimum r, trial function); the list order fixes the stream ids
THEOREMS = [
    ("resolution-triangular", "triangular", 2, trial_resolution_triangular),
    ("lemma1-general", "triangular", 3, partial(trial_lemma1, variant="general")),
    ("lemma1-divisor", "triangular", 3, partial(trial_lemma1, variant="divisor")),
    ("corollary-forward", "triangular", 3, partial(trial_corollary_triangular, direction="forward")),
    ("corollary-backward", "triangular", 3, partial(trial_corollary_triangular, direction="backward")),
    ("resolution-tangential", "tangential", 1, trial_resolution_tangential),
    ("divisor-shape-tangential", "tangential", 1, trial_divisor_shape_tangential),
    ("prop-tangential", "tangential", 1, trial_prop_tangential),
    ("prop-tangential-contrast", "tangential", 1, trial_tangential_contrast),
    ("dimension-identity", "identities", 1, None),
    ("riemann-roch", "identities", 2, None),
]
_BY_NAME = {t[0]: (i, t) for i, t in enumerate(THEOREMS)}


@dataclass
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = 20
    r_min: int | None = None
    r_max: int | None = None
    suite: str = "all"
    format: str = "text"
    output_path: str | None = None
    jobs: int = 1

    def validate(self):
        if self.suite not in SUITES + ("all",):
            raise ConfigInvalid(f"unknown suite {self.suite!r}")
        if self.format not in ("text", "json"):
            raise ConfigInvalid(f"unknown format {self.format!r}")
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if self.jobs < 1:
            raise ConfigInvalid("jobs must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be a 64-bit unsigned integer")
        if not is_prime(self.prime):
            raise ConfigInvalid(f"{self.prime} is not prime")
        if self.r_min is not None and self.r_max is not None and self.r_min > self.r_max:
            raise ConfigInvalid("r-min exceeds r-max")
        if self.suite != "all":
            lo, hi = self.r_range(self.suite)
            slo, shi = SUPPORTED_RANGES[self.suite]
            if lo < slo or hi > shi:
                raise ConfigInvalid(f"{self.suite} supports r in {slo}..{shi}, got {lo}..{hi}")

    def suites(self) -> list[str]:
        return list(SUITES) if self.suite == "all" else [self.suite]

    def r_range(self, suite: str) -> tuple[int, int]:
        lo, hi = DEFAULT_RANGES[suite]
        lo = lo if self.r_min is None else self.r_min
        hi = hi if self.r_max is None else self.r_max
        if self.suite == "all":
            slo, shi = SUPPORTED_RANGES[suite]
            lo, hi = max(lo, slo), min(hi, shi)
        return lo, hi


@dataclass
class RunReport:
    config: RunConfig
    results: list[VerificationReport]
    aggregate_pass: bool
    total_wall_time: float
    error: str | None = None
    version: str = __version__

    def as_dict(self) -> dict:
        cfg = asdict(self.config)
        out = {"schema": SCHEMA, "config": cfg, "results": [r.as_dict() for r in self.results],
               "aggregate_pass": self.aggregate_pass, "version": self.version,
               "total_wall_time": self.total_wall_time}
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"liaison-lab {self.version}  prime={self.config.prime} seed={self.config.seed} "
                 f"trials={self.config.trials} suite={self.config.suite}"]
        if self.error:
            lines.append(f"ERROR {self.error}")
        for r in self.results:
            status = "PASS" if r.all_passed else "FAIL"
            lines.append(f"{status}  {r.theorem:<26} r={r.r:<3} {r.passes}/{r.trials}  ({r.wall_time:.2f}s)")
            for f in r.failures:
                lines.append(f"      trial {f['trial']} seed {f['seed']}: {f['detail']}")
        lines.append(f"aggregate: {'PASS' if self.aggregate_pass else 'FAIL'}  ({self.total_wall_time:.2f}s)")
        return "\n".join(lines)

    def render(self) -> str:
        return self.to_json() if self.config.format == "json" else self.to_text()


def trial_seed(seed: int, theorem: str, r: int, trial: int) -> int:
    """Seed of one trial, derived from the run seed and its stream id (theorem, r, trial)."""
    idx = _BY_NAME[theorem][0]
    ss = np.random.SeedSequence([seed, idx, r, trial])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def run_trial(prime: int, theorem: str, r: int, seed: int) -> TrialOutcome:
    """Run one trial in isolation; this is also the reproduction entry point."""
    fn = _BY_NAME[theorem][1][3]
    try:
        return fn(PrimeField(prime), r, np.random.default_rng(seed))
    except LiaisonLabError as exc:
        return TrialOutcome(False, {}, f"{type(exc).__name__}: {exc}")


def _timed_trial(prime: int, theorem: str, r: int, seed: int) -> tuple[TrialOutcome, float]:
    t0 = time.perf_counter()
    out = run_trial(prime, theorem, r, seed)
    return out, time.perf_counter() - t0


def _identity_report(theorem: str, r: int) -> VerificationReport:
    rep = VerificationReport(theorem, r)
    if theorem == "dimension-identity":
        ok = dimension_identity_tangential(r)
        outcome = TrialOutcome(ok, {"identity": ok})
    else:
        ok = riemann_roch_ledger(r)
        outcome = TrialOutcome(ok, {"correction": riemann_roch_correction(r)})
    rep.add(0, 0, outcome if ok else TrialOutcome(False, outcome.ledger, "identity fails"))
    return rep


def _plan(config: RunConfig) -> list[tuple[str, str, int]]:
    plan = []
    for suite in config.suites():
        lo, hi = config.r_range(suite)
        for name, s, rmin, _ in THEOREMS:
            if s != suite:
                continue
            plan.extend((suite, name, r) for r in range(max(lo, rmin), hi + 1))
    return plan


def run_suite(config: RunConfig) -> RunReport:
    """Execute the selected suites.  Verifier errors are recorded per trial."""
    start = time.perf_counter()
    try:
        config.validate()
        PrimeField(config.prime)
    except LiaisonLabError as exc:
        return RunReport(config, [], False, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")

    plan = _plan(config)
    tasks = []
    for suite, name, r in plan:
        if suite == "identities":
            continue
        for t in range(config.trials):
            tasks.append((name, r, t, trial_seed(config.seed, name, r, t)))

    args = ([config.prime] * len(tasks), [t[0] for t in tasks], [t[1] for t in tasks], [t[3] for t in tasks])
    if config.jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_timed_trial, *args, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    else:
        outcomes = [_timed_trial(*a) for a in zip(*args)]
    by_key = {(t[0], t[1], t[2]): (t[3], o) for t, o in zip(tasks, outcomes)}

    results = []
    for suite, name, r in plan:
        if suite == "identities":
            results.append(_identity_report(name, r))
            continue
        rep = VerificationReport(name, r)
        for t in range(config.trials):
            seed, (outcome, dt) = by_key[(name, r, t)]
            rep.add(t, seed, outcome)
            rep.wall_time += dt
        for f in rep.failures:
            f.update({"suite": suite, "r": r, "stream": [_BY_NAME[name][0], r, f["trial"]]})
        results.append(rep)

    aggregate = bool(results) and all(r.all_passed for r in results)
    return RunReport(config, results, aggregate, time.perf_counter() - start)


def exit_code(report: RunReport) -> int:
    if report.error is not None:
        return 2
    return 0 if report.aggregate_pass else 1
