"""Command line: ``liaison-lab run ...`` and ``liaison-lab betti ...``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad configuration or input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import DegreeOutOfRange, LiaisonLabError, ParseError
from .field import DEFAULT_PRIME, PrimeField
from .harness import RunConfig, exit_code, run_suite
from .ideal import IdealHandle
from .ring import ProjPoint


def load_points(path, field) -> list[ProjPoint]:
    """Read a JSON array of integer triples, interpreted mod p."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read points from {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ParseError("points file must hold a JSON array")
    pts = []
    for i, item in enumerate(data):
        if (not isinstance(item, list) or len(item) != 3
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
            raise ParseError(f"entry {i} is not a triple of integers: {item!r}")
        try:
            pts.append(ProjPoint.make(field, item))
        except ValueError as exc:
            raise ParseError(f"entry {i}: {exc}") from exc
    if len(set(pts)) != len(pts):
        raise ParseError("points are not distinct in P^2 over the chosen field")
    return pts


def betti_command(points_path, d_max: int | None, prime: int = DEFAULT_PRIME, fmt: str = "text") -> str:
    field = PrimeField(prime)
    Z = IdealHandle.from_points(field, load_points(points_path, field))
    need = Z.default_dmax()
    if d_max is None:
        d_max = need
    if d_max < need:
        raise DegreeOutOfRange(f"--dmax {d_max} is too small; generators and syzygies need {need}")
    betti = Z.betti_table(d_max)
    prof = Z.hilbert_profile(d_max)
    if fmt == "json":
        return json.dumps({**betti.as_dict(), "hilbert_profile": {str(k): v for k, v in prof.values.items()},
                           "stable_value": prof.stable_value}, indent=2, sort_keys=True)
    return f"beta0: {betti.beta0}\nbeta1: {betti.beta1}\nhilbert: {prof}"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liaison-lab", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites")
    run.add_argument("--suite", default="all", choices=["triangular", "tangential", "identities", "all"])
    run.add_argument("--r-min", type=int)
    run.add_argument("--r-max", type=int)
    run.add_argument("--trials", type=int, default=20)
    run.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--format", default="text", choices=["text", "json"])
    run.add_argument("--out")
    run.add_argument("--jobs", type=int, default=1)

    betti = sub.add_parser("betti", help="Betti table and Hilbert function of a points file")
    betti.add_argument("--points", required=True)
    betti.add_argument("--dmax", type=int)
    betti.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    betti.add_argument("--format", default="text", choices=["text", "json"])
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "betti":
        try:
            print(betti_command(args.points, args.dmax, args.prime, args.format))
        except (LiaisonLabError, ValueError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 2
        return 0

    config = RunConfig(prime=args.prime, seed=args.seed, trials=args.trials, r_min=args.r_min,
                       r_max=args.r_max, suite=args.suite, format=args.format,
                       output_path=args.out, jobs=args.jobs)
    report = run_suite(config)
    text = report.render()
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"report written to {args.out}: {'PASS' if report.aggregate_pass else 'FAIL'}")
    else:
        print(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
