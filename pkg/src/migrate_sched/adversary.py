"""Adaptive lower-bound game against any online scheduler.

The adversary first feeds ``n'`` jobs of size ``m/n'`` (total volume exactly
``m``).  It then inspects the scheduler's loads:

* some machine already carries at least ``alpha_m``: finish with ``m`` probe
  jobs of size ``eps/m``; the offline optimum is ``1 + eps/m``;
* otherwise, sorting loads ascending, there must be a position ``j0 <= m-1``
  whose load reaches ``(alpha_m - 1) * m / (m - j0)`` (a volume-counting
  consequence of the profile equation); finish with ``j0`` jobs of size
  ``m/(m - j0)``; the offline optimum is at most that size, plus one dust job
  when ``n'`` does not split evenly across ``m - j0`` machines.

The scheduler may then migrate whatever its policy allows (``finalize``); the
certified output is the measured final makespan over the optimum upper bound,
which lower-bounds the scheduler's competitive ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Protocol, Sequence

from .alpha import RatioProfile, solve_alpha
from .core import FractionLike, InvariantViolation, Job, Migrate, as_fraction

__all__ = ["AdversaryOutcome", "OnlineScheduler", "play_adversary", "sweep_adversary"]


class OnlineScheduler(Protocol):
    """What the adversary needs from a scheduler: deterministic online
    placement, inspectable loads, and migrations only at finalize."""

    m: int

    def accept(self, job: Job) -> None: ...

    def loads(self) -> tuple[Fraction, ...]: ...

    def finalize(self) -> list[Migrate]: ...

    def makespan(self) -> Fraction: ...


@dataclass(frozen=True)
class AdversaryOutcome:
    """Result of one game: the sequence played and the certified ratio bound."""

    m: int
    n_prime: int
    eps: Fraction
    sequence: tuple[Job, ...]
    alg_makespan: Fraction
    opt_upper: Fraction
    ratio_lb: Fraction
    branch: str
    migrations: int


def play_adversary(
    scheduler: OnlineScheduler,
    m: int,
    n_prime: int,
    eps_prime: FractionLike = Fraction(1, 1000),
    *,
    profile: RatioProfile | None = None,
) -> AdversaryOutcome:
    """Play the adaptive sequence against a fresh scheduler and certify the ratio."""
    if m < 2:
        raise ValueError(f"need at least 2 machines, got m={m}")
    if scheduler.m != m:
        raise ValueError(f"scheduler has m={scheduler.m}, game has m={m}")
    if n_prime < m or n_prime % m:
        raise ValueError(f"n' must be a positive multiple of m, got {n_prime}")
    eps = as_fraction(eps_prime)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if any(load != 0 for load in scheduler.loads()):
        raise ValueError("scheduler must be fresh (all loads zero)")
    prof = profile if profile is not None else solve_alpha(m)
    alpha = prof.alpha

    p1 = Fraction(m, n_prime)
    sequence = [Job(t, p1) for t in range(1, n_prime + 1)]
    for job in sequence:
        scheduler.accept(job)

    loads = scheduler.loads()
    if max(loads) >= alpha:
        branch = "overloaded"
        tail_size = eps / m
        tail_count = m
        opt_upper = 1 + eps / m
    else:
        ordered = sorted(loads)
        j0 = None
        for j in range(1, m):
            if ordered[j - 1] >= (alpha - 1) * Fraction(m, m - j):
                j0 = j
                break
        if j0 is None:
            raise InvariantViolation(
                "adversary-profile-gap",
                f"no position reaches its profile bound; loads sum to {sum(loads)}",
            )
        branch = f"profile-gap({j0})"
        tail_size = Fraction(m, m - j0)
        tail_count = j0
        opt_upper = tail_size + (p1 if n_prime % (m - j0) else 0)

    for i in range(1, tail_count + 1):
        job = Job(n_prime + i, tail_size)
        sequence.append(job)
        scheduler.accept(job)

    migrations = scheduler.finalize()
    makespan = scheduler.makespan()
    return AdversaryOutcome(
        m=m,
        n_prime=n_prime,
        eps=eps,
        sequence=tuple(sequence),
        alg_makespan=makespan,
        opt_upper=opt_upper,
        ratio_lb=makespan / opt_upper,
        branch=branch,
        migrations=len(migrations),
    )


def sweep_adversary(
    scheduler_factory: Callable[[], OnlineScheduler],
    m: int,
    n_primes: Sequence[int],
    eps_prime: FractionLike = Fraction(1, 1000),
) -> list[AdversaryOutcome]:
    """One game per n', each against a fresh scheduler from the factory."""
    if not n_primes:
        raise ValueError("need at least one n' value")
    return [
        play_adversary(scheduler_factory(), m, n_prime, eps_prime)
        for n_prime in n_primes
    ]
