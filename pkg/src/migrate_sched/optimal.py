"""The migration-optimal online scheduler.

Arrival phase: each arriving job is classified small or large against the
threshold ``(alpha-1) * L_t`` (``L_t`` is the online lower bound including the
new job).  Small jobs go to the lowest-index machine whose currently-small
load fits under the ``beta`` profile; large jobs go to a least loaded machine.

Migration phase, once the sequence ends: while some machine's load exceeds
``max(beta(j) * L*, (alpha-1) * L)`` its largest job is removed; the removed
jobs that are still large are then reassigned in up-to-two-job sets (pairing
the i-th largest with the (2m+1-i)-th largest when the partner is more than
half its size, heaviest set first), and everything left over goes to least
loaded machines in non-increasing size order.

The run enforces its own guarantees while it executes: the profile machine
must exist for every small job, no machine may need more than ``mu`` removals,
and at most 2m removed jobs may be large.  A failure of any of these raises
``InvariantViolation`` because it can only mean the implementation is wrong.
"""

from __future__ import annotations

from fractions import Fraction

from .alpha import RatioProfile, solve_alpha
from .core import (
    Instance,
    InvariantViolation,
    Job,
    Migrate,
    OptBoundTracker,
    ScheduleState,
    SmallLoadCache,
    least_loaded,
)
from .report import RunReport

__all__ = ["OptimalRun", "report_from_run", "run_alg_opt"]


class OptimalRun:
    """Single run of the migration-optimal scheduler on ``m`` machines."""

    def __init__(self, m: int, *, profile: RatioProfile | None = None, check: bool = True) -> None:
        self.profile = profile if profile is not None else solve_alpha(m)
        if self.profile.m != m:
            raise ValueError(f"profile is for m={self.profile.m}, run is for m={m}")
        self.m = m
        self.check = check
        self.state = ScheduleState(m)
        self.tracker = OptBoundTracker(m)
        self.phase = "arrival"
        self.per_machine_removals = [0] * m
        self.set_totals: tuple[Fraction, ...] = ()
        self.migrations = 0
        self.profile_checks = 0
        self._caches = [SmallLoadCache() for _ in range(m)]
        self._prev_bound: Fraction | None = None

    # -- arrival phase ------------------------------------------------------

    def accept(self, job: Job) -> None:
        if self.phase != "arrival":
            raise RuntimeError("cannot accept jobs after the migration phase started")
        alpha = self.profile.alpha
        beta = self.profile.beta
        self.tracker.push(job.p)
        bound = self.tracker.lower_bound()
        if self.check and self._prev_bound is not None and bound < self._prev_bound:
            raise InvariantViolation(
                "lower-bound-monotone", f"L dropped from {self._prev_bound} to {bound}"
            )
        self._prev_bound = bound
        threshold = (alpha - 1) * bound
        for cache in self._caches:
            cache.promote(threshold)
        if self.check and self.tracker.over_large_limit(threshold):
            raise InvariantViolation(
                "large-count", f"more than 2m jobs large at t={self.tracker.t}"
            )
        lstar = (self.tracker.p_plus - self.tracker.large_sum(threshold)) / self.m

        if job.p <= threshold:
            target = None
            for j in range(self.m):
                if self._caches[j].small_sum <= beta[j] * lstar:
                    target = j + 1
                    break
            if target is None:
                raise InvariantViolation(
                    "profile-existence",
                    f"no machine admits small job {job.id} at t={self.tracker.t}",
                )
        else:
            target = least_loaded(self.state)
        self.state.assign(job, target)
        self._caches[target - 1].add(job, threshold)

        if self.check:
            # The profile machine must still exist after the placement; the
            # volume argument behind it holds with equality, so this is a
            # hard guarantee, not a heuristic.
            self.profile_checks += 1
            if not any(
                self._caches[j].small_sum <= beta[j] * lstar for j in range(self.m)
            ):
                raise InvariantViolation(
                    "profile-existence", f"profile violated after placing job {job.id}"
                )

    # -- migration phase ----------------------------------------------------

    def removal_step(self) -> list[Job]:
        """Strip overloaded machines down to max(beta(j)*L*, (alpha-1)*L)."""
        if self.phase != "arrival":
            raise RuntimeError("removal step already ran")
        if self.tracker.t == 0:
            raise ValueError("no jobs were scheduled")
        alpha = self.profile.alpha
        beta = self.profile.beta
        mu = self.profile.mu
        bound = self.tracker.lower_bound()
        lstar = self.tracker.small_load_average(alpha)
        self._final_bound = bound
        self._final_lstar = lstar
        removed: list[Job] = []
        for j in range(1, self.m + 1):
            machine = self.state.machine(j)
            limit = max(beta[j - 1] * lstar, (alpha - 1) * bound)
            count = 0
            while machine.load > limit:
                job = machine.largest()
                self.state.detach(job.id)
                removed.append(job)
                count += 1
                if count > mu:
                    raise InvariantViolation(
                        "removal-cap", f"machine {j} needed more than {mu} removals"
                    )
            self.per_machine_removals[j - 1] = count
        self.phase = "migration"
        return removed

    def reassign_step(self, removed: list[Job]) -> None:
        if self.phase != "migration":
            raise RuntimeError("reassign step must follow the removal step")
        alpha = self.profile.alpha
        m = self.m
        bound = self._final_bound
        threshold = (alpha - 1) * bound

        if self.check:
            cap = alpha * bound
            for machine in self.state.machines:
                if machine.load > cap:
                    raise InvariantViolation(
                        "post-removal-load",
                        f"machine {machine.index} at {machine.load} > alpha*L = {cap}",
                    )

        large = sorted(
            (job for job in removed if job.p > threshold),
            key=lambda job: (-job.p, job.id),
        )
        if len(large) > 2 * m:
            raise InvariantViolation(
                "large-removed-count", f"{len(large)} large jobs removed, limit {2 * m}"
            )
        k = len(large)
        sets: list[list[Job]] = [[] for _ in range(m)]
        for i in range(1, min(m, k) + 1):
            sets[i - 1].append(large[i - 1])
            partner = 2 * m + 1 - i
            if partner <= k and large[partner - 1].p > large[i - 1].p / 2:
                sets[i - 1].append(large[partner - 1])
        totals = [sum((job.p for job in group), Fraction(0)) for group in sets]
        order = sorted(range(m), key=lambda i: (-totals[i], i))
        self.set_totals = tuple(totals[i] for i in order)

        placed: set[int] = set()
        for i in order:
            if not sets[i]:
                continue
            target = least_loaded(self.state)
            for job in sets[i]:
                self.state.attach(job, target)
                placed.add(job.id)
        rest = sorted(
            (job for job in removed if job.id not in placed),
            key=lambda job: (-job.p, job.id),
        )
        for job in rest:
            self.state.attach(job, least_loaded(self.state))

        self.migrations += len(removed)
        self.phase = "migrated"
        if self.state.detached_count:
            raise InvariantViolation("dangling-jobs", "migration phase left detached jobs")

    def finalize(self) -> list[Migrate]:
        mark = len(self.state.events)
        self.reassign_step(self.removal_step())
        return [e for e in self.state.events[mark:] if isinstance(e, Migrate)]

    # -- inspection -----------------------------------------------------------

    def loads(self) -> tuple[Fraction, ...]:
        return self.state.loads()

    def makespan(self) -> Fraction:
        return self.state.makespan()


def report_from_run(run: OptimalRun, n: int, opt: Fraction | None = None) -> RunReport:
    """Report for a finalized run.

    When the exact optimum ``opt`` is supplied, the competitive guarantee
    ``makespan <= alpha * opt``, the bound ``L <= opt``, and the pairing-set
    bound ``max set total <= opt`` are checked and recorded as violations.
    """
    if run.phase != "migrated":
        raise RuntimeError("run must be finalized before reporting")
    bound = run.tracker.lower_bound()
    makespan = run.makespan()
    mu = run.profile.mu
    if run.migrations > mu * run.m:
        raise InvariantViolation(
            "migration-budget", f"{run.migrations} migrations > {mu}*m"
        )
    violations: list[str] = []
    if opt is not None:
        if makespan > run.profile.alpha * opt:
            violations.append("competitive-ratio")
        if bound > opt:
            violations.append("lower-bound-exceeds-opt")
        if run.set_totals and run.set_totals[0] > opt:
            violations.append("pairing-total-exceeds-opt")
    return RunReport(
        alg="opt",
        m=run.m,
        n=n,
        makespan=makespan,
        lower_bound=bound,
        opt=opt,
        migrations=run.migrations,
        per_machine_removals=tuple(run.per_machine_removals),
        violations=tuple(violations),
    )


def run_alg_opt(
    instance: Instance,
    *,
    opt: Fraction | None = None,
    check: bool = True,
    profile: RatioProfile | None = None,
) -> RunReport:
    """Full pipeline: arrival phase, migration phase, report."""
    if not instance.jobs:
        raise ValueError("instance has no jobs")
    run = OptimalRun(instance.m, profile=profile, check=check)
    for job in instance.jobs:
        run.accept(job)
    run.finalize()
    return report_from_run(run, instance.n, opt)
