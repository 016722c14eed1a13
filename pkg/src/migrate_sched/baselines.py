"""Baseline schedulers and exact references.

* Graham's List rule (assign to a least loaded machine), as a report-producing
  run and as an online scheduler usable by the adversary.
* LPT (longest processing time first), used as the initial incumbent of the
  exact solver and exposed as a baseline.
* ``opt_makespan``: exact optimal makespan by branch and bound, guarded by an
  instance-size limit (override via ``MIGRATE_SCHED_ORACLE_GUARD`` or the
  ``guard`` argument).
* ``pairing_opt``: makespan of the schedule that pairs the i-th largest with
  the (2m+1-i)-th largest job; optimal whenever every job exceeds a third of
  the optimum.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    BudgetBoundTracker,
    FractionLike,
    Instance,
    Job,
    Migrate,
    ScheduleState,
    as_fraction,
    least_loaded,
)
from .report import RunReport

__all__ = [
    "ListRun",
    "OracleGuardError",
    "lpt_makespan",
    "opt_makespan",
    "oracle_guard",
    "pairing_opt",
    "report_from_list_run",
    "run_list",
]

DEFAULT_ORACLE_GUARD = 22
GUARD_ENV_VAR = "MIGRATE_SCHED_ORACLE_GUARD"


class OracleGuardError(RuntimeError):
    """The exact oracle was asked for an instance above its size guard."""


def oracle_guard() -> int:
    value = os.environ.get(GUARD_ENV_VAR)
    return int(value) if value else DEFAULT_ORACLE_GUARD


class ListRun:
    """Graham's List rule as an online scheduler; performs no migrations."""

    def __init__(self, m: int) -> None:
        self.m = m
        self.state = ScheduleState(m)
        self.tracker = BudgetBoundTracker(m)

    def accept(self, job: Job) -> None:
        self.tracker.push(job.p)
        self.state.assign(job, least_loaded(self.state))

    def finalize(self) -> list[Migrate]:
        return []

    def loads(self) -> tuple[Fraction, ...]:
        return self.state.loads()

    def makespan(self) -> Fraction:
        return self.state.makespan()


def report_from_list_run(run: ListRun, n: int, opt: Fraction | None = None) -> RunReport:
    violations: list[str] = []
    makespan = run.makespan()
    # List guarantee: makespan <= (2 - 1/m) * OPT.
    if opt is not None and makespan * run.m > (2 * run.m - 1) * opt:
        violations.append("list-ratio")
    return RunReport(
        alg="list",
        m=run.m,
        n=n,
        makespan=makespan,
        lower_bound=run.tracker.lower_bound(),
        opt=opt,
        migrations=0,
        per_machine_removals=(0,) * run.m,
        violations=tuple(violations),
    )


def run_list(instance: Instance, opt: Fraction | None = None) -> RunReport:
    """Pure List schedule.  The reported lower bound is the budget-family
    tracker (the tighter of the two online bounds)."""
    if not instance.jobs:
        raise ValueError("instance has no jobs")
    run = ListRun(instance.m)
    for job in instance.jobs:
        run.accept(job)
    return report_from_list_run(run, instance.n, opt)


def _greedy_makespan(sizes_desc: Sequence[Fraction], m: int) -> Fraction:
    loads = [Fraction(0)] * m
    for p in sizes_desc:
        j = min(range(m), key=lambda i: loads[i])
        loads[j] += p
    return max(loads)


def lpt_makespan(instance: Instance) -> Fraction:
    """Makespan of the longest-processing-time-first greedy schedule."""
    sizes = sorted((job.p for job in instance.jobs), reverse=True)
    return _greedy_makespan(sizes, instance.m)


def opt_makespan(instance: Instance, guard: int | None = None) -> Fraction:
    """Exact minimum makespan via depth-first branch and bound.

    Jobs are pre-sorted non-increasing; the search starts from the LPT
    incumbent, prunes on the running best and the volume/size lower bound,
    and explores at most one machine per distinct load at each level (equal
    loads give identical subtrees, so exactness is unaffected).
    """
    n = instance.n
    limit = guard if guard is not None else oracle_guard()
    if n > limit:
        raise OracleGuardError(f"instance has {n} jobs, oracle guard is {limit}")
    if n == 0:
        return Fraction(0)
    m = instance.m
    sizes = sorted((job.p for job in instance.jobs), reverse=True)
    lower = max(instance.total / m, sizes[0])
    best = _greedy_makespan(sizes, m)
    if best == lower:
        return best

    loads = [Fraction(0)] * m

    def descend(i: int, current_max: Fraction) -> None:
        nonlocal best
        if current_max >= best:
            return
        if i == n:
            best = current_max
            return
        p = sizes[i]
        seen: set[Fraction] = set()
        for j in range(m):
            before = loads[j]
            if before in seen:
                continue
            seen.add(before)
            after = before + p
            if after >= best:
                continue
            loads[j] = after
            descend(i + 1, max(current_max, after))
            loads[j] = before
            if best == lower:
                return

    descend(0, Fraction(0))
    return best


def pairing_opt(sizes: Iterable[FractionLike], m: int) -> Fraction:
    """Makespan of the pairing schedule on at most 2m jobs.

    Machine i receives the i-th largest job together with the (2m+1-i)-th
    largest when the latter exists.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    ps = sorted((as_fraction(p) for p in sizes), reverse=True)
    if len(ps) > 2 * m:
        raise ValueError(f"pairing schedule needs <= 2m jobs, got {len(ps)} for m={m}")
    if not ps:
        return Fraction(0)
    best = Fraction(0)
    k = len(ps)
    for i in range(1, m + 1):
        total = ps[i - 1] if i <= k else Fraction(0)
        partner = 2 * m + 1 - i
        if partner <= k:
            total += ps[partner - 1]
        best = max(best, total)
    return best
