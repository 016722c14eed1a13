"""Batch experiment runner: (algorithm x instance spec) grids to CSV.

Rows execute independently (optionally in a process pool); the output order
always follows the input order, and identical inputs give identical CSV.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .baselines import OracleGuardError, opt_makespan, oracle_guard, run_list
from .budget import run_alg_c
from .core import as_fraction
from .generate import GenSpec, generate
from .optimal import run_alg_opt
from .report import REPORT_CSV_HEADER, RunReport, report_csv_row

__all__ = ["BATCH_CSV_HEADER", "BatchResult", "batch", "parse_alg", "to_csv"]

BATCH_CSV_HEADER = ("kind", "seed", *REPORT_CSV_HEADER)


def parse_alg(text: str) -> tuple[str, Fraction | None]:
    """Parse an algorithm selector: 'opt', 'list', or 'c:<ratio>' (e.g. c:5/3)."""
    if text == "opt" or text == "list":
        return text, None
    if text == "c" or text.startswith("c:"):
        ratio = as_fraction(text[2:]) if ":" in text else Fraction(5, 3)
        return "c", ratio
    raise ValueError(f"unknown algorithm selector {text!r}")


@dataclass(frozen=True)
class BatchResult:
    rows: tuple[tuple[GenSpec, str, RunReport], ...]

    @property
    def has_violations(self) -> bool:
        return any(report.violations for _, _, report in self.rows)

    @property
    def reports(self) -> tuple[RunReport, ...]:
        return tuple(report for _, _, report in self.rows)


def _run_one(task: tuple[GenSpec, str, bool, bool, int | None]) -> tuple[GenSpec, str, RunReport]:
    spec, alg_text, check, require_opt, guard = task
    instance = generate(spec)
    limit = guard if guard is not None else oracle_guard()
    opt = None
    if instance.n <= limit:
        opt = opt_makespan(instance, guard=limit)
    elif require_opt:
        raise OracleGuardError(
            f"--require-opt: instance of {instance.n} jobs exceeds oracle guard {limit}"
        )
    name, ratio = parse_alg(alg_text)
    if name == "opt":
        report = run_alg_opt(instance, opt=opt, check=check)
    elif name == "list":
        report = run_list(instance, opt=opt)
    else:
        report = run_alg_c(instance, ratio, opt=opt, check=check)
    return spec, alg_text, report


def batch(
    algs: list[str],
    specs: list[GenSpec],
    *,
    check: bool = True,
    require_opt: bool = False,
    guard: int | None = None,
    workers: int = 1,
) -> BatchResult:
    """Run every algorithm on every spec; one report per (spec, alg) pair."""
    if not algs or not specs:
        raise ValueError("need at least one algorithm and one instance spec")
    for alg in algs:
        parse_alg(alg)  # fail fast on typos
    tasks = [
        (spec, alg, check, require_opt, guard) for spec in specs for alg in algs
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(_run_one, tasks))
    else:
        rows = tuple(_run_one(task) for task in tasks)
    return BatchResult(rows=rows)


def to_csv(result: BatchResult) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BATCH_CSV_HEADER)
    for spec, _, report in result.rows:
        writer.writerow([spec.kind, str(spec.seed), *report_csv_row(report)])
    return out.getvalue()
