"""Command-line interface.

Subcommands: alpha, run, opt, adversary, gen, batch, verify.
Exit codes: 0 success, 2 invariant violation, 3 oracle guard exceeded under
--require-opt.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance
from .adversary import play_adversary
from .alpha import solve_alpha
from .baselines import (
    ListRun,
    OracleGuardError,
    opt_makespan,
    report_from_list_run,
)
from .batch import batch, to_csv
from .budget import BudgetRun
from .budget import report_from_run as budget_report
from .core import (
    InvariantViolation,
    as_fraction,
    format_instance,
    load_instance,
    save_instance,
    save_trace,
)
from .generate import KINDS, GenSpec, generate
from .optimal import OptimalRun
from .optimal import report_from_run as optimal_report
from .report import REPORT_CSV_HEADER, frac_dec, frac_str, report_csv_row

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_GUARD = 3


def _alpha_rows(m_lo: int, m_hi: int) -> list[list[str]]:
    rows = []
    for m in range(m_lo, m_hi + 1):
        profile = solve_alpha(m)
        rows.append(
            [
                str(m),
                str(profile.alpha.numerator),
                str(profile.alpha.denominator),
                frac_dec(profile.alpha),
                str(profile.mu),
            ]
        )
    return rows


def cmd_alpha(args: argparse.Namespace) -> int:
    m_hi = args.table if args.table is not None else args.m
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["m", "alpha_num", "alpha_den", "alpha_dec", "mu"])
    writer.writerows(_alpha_rows(args.m, m_hi))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    opt = opt_makespan(instance) if args.with_opt else None
    if args.alg == "opt":
        run = OptimalRun(instance.m, check=args.check)
    elif args.alg == "c":
        run = BudgetRun(instance.m, as_fraction(args.c), check=args.check)
    else:
        run = ListRun(instance.m)
    for job in instance.jobs:
        run.accept(job)
    run.finalize()
    if args.alg == "opt":
        report = optimal_report(run, instance.n, opt)
    elif args.alg == "c":
        report = budget_report(run, instance.n, opt)
    else:
        report = report_from_list_run(run, instance.n, opt)
    if args.trace:
        save_trace(run.state.events, args.trace)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(REPORT_CSV_HEADER)
    writer.writerow(report_csv_row(report))
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_opt(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    value = opt_makespan(instance, guard=args.guard)
    print(frac_str(value))
    return EXIT_OK


def cmd_adversary(args: argparse.Namespace) -> int:
    m = args.m
    if args.alg == "opt":
        scheduler = OptimalRun(m)
    elif args.alg == "c":
        scheduler = BudgetRun(m, as_fraction(args.c))
    else:
        scheduler = ListRun(m)
    outcome = play_adversary(scheduler, m, args.nprime, as_fraction(args.eps))
    payload = {
        "alg": args.alg,
        "m": outcome.m,
        "n_prime": outcome.n_prime,
        "eps": frac_str(outcome.eps),
        "branch": outcome.branch,
        "alg_makespan": frac_str(outcome.alg_makespan),
        "opt_upper": frac_str(outcome.opt_upper),
        "ratio_lb": frac_str(outcome.ratio_lb),
        "ratio_lb_dec": frac_dec(outcome.ratio_lb),
        "migrations": outcome.migrations,
    }
    if not args.no_sequence:
        payload["sequence"] = [[job.id, frac_str(job.p)] for job in outcome.sequence]
    print(json.dumps(payload))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not value:
            raise SystemExit(f"bad --param {item!r}, expected key=value")
        params[key] = value
    spec = GenSpec.make(args.kind, n=args.n, m=args.m, seed=args.seed, **params)
    instance = generate(spec)
    if args.out:
        save_instance(instance, args.out)
    else:
        sys.stdout.write(format_instance(instance))
    return EXIT_OK


def cmd_batch(args: argparse.Namespace) -> int:
    lo, _, hi = args.seeds.partition(":")
    seeds = range(int(lo), int(hi) if hi else int(lo) + 1)
    specs = [
        GenSpec.make(args.kind, n=n, m=m, seed=seed)
        for m in args.m
        for n in args.n
        for seed in seeds
    ]
    result = batch(
        args.alg,
        specs,
        check=args.check,
        require_opt=args.require_opt,
        guard=args.guard,
        workers=args.workers,
    )
    text = to_csv(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if result.has_violations else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    numbers = tuple(args.criterion) if args.criterion else None
    ok = acceptance.run_all(numbers)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="migrate-sched",
        description="Online makespan minimization with a bounded number of job migrations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="competitive-ratio constants as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--table", type=int, metavar="M_MAX", help="print rows for m..M_MAX")
    p.set_defaults(fn=cmd_alpha)

    p = sub.add_parser("run", help="run one scheduler on one instance file")
    p.add_argument("--alg", choices=("opt", "c", "list"), required=True)
    p.add_argument("--c", default="5/3", help="target ratio for --alg c (e.g. 5/3, 7/4)")
    p.add_argument("--instance", required=True)
    p.add_argument("--check", action="store_true", default=True)
    p.add_argument("--no-check", dest="check", action="store_false")
    p.add_argument("--trace", help="write the event log as JSON lines")
    p.add_argument("--with-opt", action="store_true", help="also solve the instance exactly")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("opt", help="exact optimal makespan of an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--guard", type=int, default=None)
    p.set_defaults(fn=cmd_opt)

    p = sub.add_parser("adversary", help="play the lower-bound game, print JSON")
    p.add_argument("--alg", choices=("opt", "c", "list"), required=True)
    p.add_argument("--c", default="5/3")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nprime", type=int, required=True)
    p.add_argument("--eps", default="1/1000")
    p.add_argument("--no-sequence", action="store_true")
    p.set_defaults(fn=cmd_adversary)

    p = sub.add_parser("gen", help="generate a reproducible instance file")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("batch", help="algorithms x generated instances, CSV report")
    p.add_argument("--alg", action="append", required=True, help="opt, list, or c:<ratio>")
    p.add_argument("--kind", choices=KINDS, default="uniform")
    p.add_argument("--m", type=int, action="append", required=True)
    p.add_argument("--n", type=int, action="append", required=True)
    p.add_argument("--seeds", default="0:10", metavar="LO:HI", help="half-open range")
    p.add_argument("--check", action="store_true", default=True)
    p.add_argument("--no-check", dest="check", action="store_false")
    p.add_argument("--require-opt", action="store_true")
    p.add_argument("--guard", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_batch)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--criterion", type=int, action="append", help="run only these numbers")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OracleGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
