"""Command-line entry point.

Subcommands: constants | census | deuring | theorem1 | theorem2 | bdh | cr |
verify.  Exit status: 0 on success, 1 on a failed acceptance check, 2 on
usage errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constants, curves, harness
from .primes import sieve
from .twinseries import DEFAULT_TRUNCATION


def _write_json(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        path = out if out.endswith(".json") else out + ".json"
        with open(path, "w", encoding="ascii") as fh:
            fh.write(payload)
        print(f"wrote {path}")


def _write_csv(payload: str, out: str) -> None:
    path = out if out.endswith(".csv") else out + ".csv"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(payload)
    print(f"wrote {path}")


def _cmd_constants(args) -> int:
    cv = constants.average_constant(args.L)
    payload = {
        "frak_C": cv.value,
        "tail_bound": cv.tail_bound,
        "L": cv.truncation_limit,
        "local_factors": [
            {
                "ell": led.prime,
                "omega": led.omega_prime_count,
                "gl2": led.gl2_order,
            }
            for led in (constants.gl2_count(ell) for ell in (3, 5, 7, 11, 13))
        ],
    }
    _write_json(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_census(args) -> int:
    cache_dir = args.cache_dir or curves.default_cache_dir()
    primes = [int(p) for p in sieve(args.pmax).primes if p > 3]
    results = curves.census_many(primes, cache_dir=cache_dir, workers=args.workers)
    if args.out:
        flat = [rec for p in primes for rec in results[p]]
        curves.write_census_file(
            args.out if args.out.endswith(".csv") else args.out + ".csv", flat
        )
    total = sum(rec.count for p in primes for rec in results[p])
    print(f"census: {len(primes)} primes <= {args.pmax}, {total} curves")
    return 0


def _cmd_deuring(args) -> int:
    bad = []
    for p in (int(q) for q in sieve(args.pmax).primes if q >= 5):
        rep = curves.deuring_check(p)
        if not rep.all_match:
            bad.append(p)
    status = "PASS" if not bad else f"FAIL at p in {bad}"
    print(f"deuring check p <= {args.pmax}: {status}")
    return 0 if not bad else 1


def _cmd_theorem1(args) -> int:
    report = harness.run_theorem1(args.x, args.A, args.B)
    _write_json(report.to_json(), args.out)
    return 0 if report.passed else 1


def _cmd_theorem2(args) -> int:
    cache_dir = args.cache_dir or curves.default_cache_dir()
    report = harness.run_theorem2(
        args.pmax, limit=args.L, cache_dir=cache_dir, workers=args.workers
    )
    _write_json(report.to_json(), args.out)
    return 0 if report.passed else 1


def _cmd_bdh(args) -> int:
    x = args.x if args.x is not None else args.X + args.Y
    report = harness.run_bdh(
        x, args.R, args.Q, args.X, args.Y, limit=args.L, collect_rows=args.out is not None
    )
    if args.out is not None:
        _write_csv(harness.bdh_rows_csv(report), args.out)
        rows, report.rows = report.rows, []
        _write_json(report.to_json(), args.out)
        report.rows = rows
    else:
        slim = harness.Report(
            name=report.name, params=report.params, summary=report.summary
        )
        _write_json(slim.to_json(), None)
    return 0


def _cmd_cr(args) -> int:
    cv = constants.C_r(args.r, args.L)
    payload = {
        "r": args.r,
        "C_r": cv.value,
        "L": cv.truncation_limit,
        "tail_bound": cv.tail_bound,
    }
    if args.U is not None:
        v = args.V if args.V is not None else 20
        oracle = constants.C_r_oracle(args.r, args.U, v, limit=args.L)
        payload["oracle"] = oracle
        payload["oracle_abs_error"] = abs(oracle - cv.value)
        payload["U"] = args.U
        payload["V"] = v
    _write_json(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    report = harness.run_verify(args.suite)
    _write_json(report.to_json(), args.out)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koblitz",
        description="Curve censuses, class numbers, twin-prime series, and "
        "Euler-product constants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **help_kw):
        p = sub.add_parser(name, **help_kw)
        p.set_defaults(fn=fn)
        p.add_argument("--out", type=str, default=None, help="output path stem")
        return p

    p = add("constants", _cmd_constants, help="emit the average constant ledger")
    p.add_argument("--L", type=int, default=DEFAULT_TRUNCATION)

    p = add("census", _cmd_census, help="curve censuses for all primes <= pmax")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--cache-dir", type=str, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = add("deuring", _cmd_deuring, help="exact census vs class-number check")
    p.add_argument("--pmax", type=int, default=499)

    p = add("theorem1", _cmd_theorem1, help="box-averaged twin count experiment")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--A", type=int, default=0)
    p.add_argument("--B", type=int, default=0)

    p = add("theorem2", _cmd_theorem2, help="summed prime-order census experiment")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--L", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--cache-dir", type=str, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = add("bdh", _cmd_bdh, help="dispersion statistic over a prime window")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--Q", type=int, default=1)
    p.add_argument("--X", type=int, default=0)
    p.add_argument("--Y", type=int, required=True)
    p.add_argument("--L", type=int, default=DEFAULT_TRUNCATION)

    p = add("cr", _cmd_cr, help="per-shift constant and its oracle")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--L", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--U", type=int, default=None)
    p.add_argument("--V", type=int, default=None)

    p = add("verify", _cmd_verify, help="run an invariant suite")
    p.add_argument(
        "--suite",
        type=str,
        default="all",
        choices=["deuring", "constants", "series", "characters", "all"],
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
