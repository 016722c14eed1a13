"""Shared data model: jobs, machine states, event logs, and lower-bound trackers.

All processing times are exact rationals (``fractions.Fraction``).  Binary
floats are accepted at the boundaries and converted losslessly to dyadic
rationals, so threshold comparisons such as ``p <= (alpha-1)*L`` never suffer
rounding.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "Assign",
    "BudgetBoundTracker",
    "Event",
    "Instance",
    "InvariantViolation",
    "Job",
    "MachineState",
    "Migrate",
    "OptBoundTracker",
    "ScheduleState",
    "SmallLoadCache",
    "as_fraction",
    "event_from_dict",
    "event_to_dict",
    "format_instance",
    "least_loaded",
    "load_instance",
    "load_trace",
    "parse_instance",
    "replay",
    "save_instance",
    "save_trace",
    "small_load",
]

FractionLike = Union[Fraction, int, float, str]


class InvariantViolation(RuntimeError):
    """A guarantee the scheduler is supposed to maintain failed at runtime."""

    def __init__(self, name: str, detail: str = "") -> None:
        self.name = name
        super().__init__(f"{name}: {detail}" if detail else name)


def as_fraction(value: FractionLike) -> Fraction:
    """Coerce to an exact Fraction; floats convert to their exact binary value."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Job:
    """One job: arrival-order id (1-based) and nonnegative processing time."""

    id: int
    p: Fraction

    def __post_init__(self) -> None:
        if self.p < 0:
            raise ValueError(f"job {self.id} has negative processing time {self.p}")


@dataclass(frozen=True)
class Instance:
    """A machine count and the jobs in arrival order."""

    m: int
    jobs: tuple[Job, ...]

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"need at least 2 machines, got m={self.m}")
        ids = [job.id for job in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate job ids in instance")

    @classmethod
    def from_sizes(cls, m: int, sizes: Iterable[FractionLike]) -> "Instance":
        jobs = tuple(Job(i, as_fraction(p)) for i, p in enumerate(sizes, start=1))
        return cls(m=m, jobs=jobs)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total(self) -> Fraction:
        return sum((job.p for job in self.jobs), Fraction(0))


# --- instance file format ------------------------------------------------
#
# Line 1: "m <int>"; then one processing time per line, as a decimal
# ("1.25") or a fraction ("5/4").


def parse_instance(text: str) -> Instance:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty instance file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "m":
        raise ValueError(f"expected first line 'm <int>', got {lines[0]!r}")
    m = int(head[1])
    sizes = [Fraction(line) for line in lines[1:]]
    return Instance.from_sizes(m, sizes)


def format_instance(instance: Instance) -> str:
    out = [f"m {instance.m}"]
    out.extend(str(job.p) for job in instance.jobs)
    return "\n".join(out) + "\n"


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(format_instance(instance), encoding="utf-8")


# --- event log ------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    job: int
    to: int


@dataclass(frozen=True)
class Migrate:
    job: int
    src: int
    dst: int


Event = Union[Assign, Migrate]


def event_to_dict(event: Event) -> dict:
    if isinstance(event, Assign):
        return {"op": "assign", "job": event.job, "to": event.to}
    return {"op": "migrate", "job": event.job, "from": event.src, "to": event.dst}


def event_from_dict(d: dict) -> Event:
    op = d.get("op")
    if op == "assign":
        return Assign(job=d["job"], to=d["to"])
    if op == "migrate":
        return Migrate(job=d["job"], src=d["from"], dst=d["to"])
    raise ValueError(f"unknown event op {op!r}")


def save_trace(events: Iterable[Event], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for event in events:
            fp.write(json.dumps(event_to_dict(event)) + "\n")


def load_trace(path: str | Path) -> list[Event]:
    events = []
    with open(path, encoding="utf-8") as fp:
        for line in fp:
            if line.strip():
                events.append(event_from_dict(json.loads(line)))
    return events


# --- machines and schedules ------------------------------------------------


@dataclass
class MachineState:
    """One machine: its job multiset (keyed by job id) and exact load."""

    index: int
    jobs: dict[int, Job] = field(default_factory=dict)
    load: Fraction = Fraction(0)

    def add(self, job: Job) -> None:
        self.jobs[job.id] = job
        self.load += job.p

    def remove(self, job_id: int) -> Job:
        job = self.jobs.pop(job_id)
        self.load -= job.p
        return job

    def largest(self) -> Job | None:
        """Largest job on the machine; ties broken toward the larger id."""
        if not self.jobs:
            return None
        return max(self.jobs.values(), key=lambda job: (job.p, job.id))

    def small_load(self, threshold: Fraction) -> Fraction:
        return sum(
            (job.p for job in self.jobs.values() if job.p <= threshold), Fraction(0)
        )


def small_load(machine: MachineState, threshold: Fraction) -> Fraction:
    """Load of the jobs on ``machine`` with processing time <= threshold."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    return machine.small_load(threshold)


class ScheduleState:
    """Assignment of jobs to machines plus an append-only event log.

    Every job sits on exactly one machine, except transiently between
    ``detach`` and ``attach`` during a migration phase.  Replaying the event
    log against the instance reproduces the machine contents.
    """

    def __init__(self, m: int) -> None:
        self.m = m
        self.machines = [MachineState(index=j) for j in range(1, m + 1)]
        self.events: list[Event] = []
        self._where: dict[int, int] = {}
        self._detached: dict[int, int] = {}

    def machine(self, index: int) -> MachineState:
        return self.machines[index - 1]

    def location(self, job_id: int) -> int:
        return self._where[job_id]

    def assign(self, job: Job, index: int) -> None:
        if job.id in self._where or job.id in self._detached:
            raise ValueError(f"job {job.id} already scheduled")
        self.machine(index).add(job)
        self._where[job.id] = index
        self.events.append(Assign(job=job.id, to=index))

    def detach(self, job_id: int) -> Job:
        """Remove a job from its machine, remembering the origin for the move log."""
        src = self._where.pop(job_id)
        self._detached[job_id] = src
        return self.machine(src).remove(job_id)

    def attach(self, job: Job, index: int) -> None:
        """Place a detached job, logging the migration (origin may equal target)."""
        src = self._detached.pop(job.id)
        self.machine(index).add(job)
        self._where[job.id] = index
        self.events.append(Migrate(job=job.id, src=src, dst=index))

    @property
    def detached_count(self) -> int:
        return len(self._detached)

    def loads(self) -> tuple[Fraction, ...]:
        return tuple(machine.load for machine in self.machines)

    def makespan(self) -> Fraction:
        return max(machine.load for machine in self.machines)

    def job_count(self) -> int:
        return len(self._where)


def least_loaded(state: ScheduleState, subset: Iterable[int] | None = None) -> int:
    """Index of the minimum-load machine (ties -> smallest index)."""
    indices = range(1, state.m + 1) if subset is None else sorted(subset)
    best = None
    for j in indices:
        load = state.machine(j).load
        if best is None or load < best[0]:
            best = (load, j)
    if best is None:
        raise ValueError("least_loaded over an empty machine subset")
    return best[1]


def replay(instance: Instance, events: Iterable[Event]) -> ScheduleState:
    """Rebuild machine contents from an event log."""
    by_id = {job.id: job for job in instance.jobs}
    state = ScheduleState(instance.m)
    for event in events:
        if isinstance(event, Assign):
            state.assign(by_id[event.job], event.to)
        else:
            at = state.location(event.job)
            if at != event.src:
                raise ValueError(
                    f"trace migrates job {event.job} from {event.src}, but it sits on {at}"
                )
            job = state.detach(event.job)
            state.attach(job, event.dst)
    if state.detached_count:
        raise ValueError("trace left detached jobs")
    return state


# --- online lower-bound trackers -------------------------------------------


def _insert_top(top: list[Fraction], p: Fraction) -> None:
    """Insert p into a fixed-length descending list of the largest values seen."""
    if p <= top[-1]:
        return
    top.pop()
    i = 0
    while i < len(top) and top[i] >= p:
        i += 1
    top.insert(i, p)


class _BoundTracker:
    """Running statistics over the arrived jobs: count, volume, largest values.

    ``push`` must be called for job t before any placement decision for it;
    the lower bound at time t includes job t.
    """

    top_size = 0  # subclasses set the window length

    def __init__(self, m: int) -> None:
        if m < 1:
            raise ValueError(f"need m >= 1, got {m}")
        self.m = m
        self.t = 0
        self.p_plus = Fraction(0)
        self.top: list[Fraction] = [Fraction(0)] * self._top_len()

    def _top_len(self) -> int:
        raise NotImplementedError

    def push(self, p: Fraction) -> None:
        if p < 0:
            raise ValueError(f"negative processing time {p}")
        self.t += 1
        self.p_plus += p
        _insert_top(self.top, p)

    def lower_bound(self) -> Fraction:
        raise NotImplementedError

    def _require_started(self) -> None:
        if self.t < 1:
            raise ValueError("lower bound undefined before the first push")


class OptBoundTracker(_BoundTracker):
    """Lower bound for the ratio-optimal scheduler: max{p+/m, 3 * p^(2m+1)}."""

    def _top_len(self) -> int:
        return 2 * self.m + 1

    def lower_bound(self) -> Fraction:
        self._require_started()
        return max(self.p_plus / self.m, 3 * self.top[-1])

    def large_sum(self, threshold: Fraction) -> Fraction:
        """Total of the top-2m values strictly above threshold."""
        return sum((v for v in self.top[:-1] if v > threshold), Fraction(0))

    def small_load_average(self, alpha: Fraction) -> Fraction:
        """Average machine load ignoring jobs currently large: (p+ - sum large)/m."""
        threshold = (alpha - 1) * self.lower_bound()
        return (self.p_plus - self.large_sum(threshold)) / self.m

    def over_large_limit(self, threshold: Fraction) -> bool:
        """True iff more than 2m arrived jobs exceed threshold."""
        return self.top[-1] > threshold


class BudgetBoundTracker(_BoundTracker):
    """Lower bound for the migration-budget family: max{p+/m, p^1, 2 * p^(m+1)}."""

    def _top_len(self) -> int:
        return self.m + 1

    def lower_bound(self) -> Fraction:
        self._require_started()
        return max(self.p_plus / self.m, self.top[0], 2 * self.top[-1])


class SmallLoadCache:
    """Small-job load of one machine under a non-decreasing threshold.

    Jobs only ever flip from large to small as the lower bound grows, so each
    job is re-classified at most once; queries are O(1) after ``promote``.
    Matches ``small_load(machine, threshold)`` exactly for the same threshold.
    """

    def __init__(self) -> None:
        self.small_sum = Fraction(0)
        self._large: list[tuple[Fraction, int]] = []  # min-heap by size

    def promote(self, threshold: Fraction) -> None:
        large = self._large
        while large and large[0][0] <= threshold:
            p, _ = heapq.heappop(large)
            self.small_sum += p

    def add(self, job: Job, threshold: Fraction) -> None:
        if job.p <= threshold:
            self.small_sum += job.p
        else:
            heapq.heappush(self._large, (job.p, job.id))
