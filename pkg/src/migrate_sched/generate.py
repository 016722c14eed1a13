"""Deterministic instance generation for experiments and tests.

Kinds:

* ``uniform``      -- independent rationals num/den, num in [lo, hi],
                      den in [1, den_max];
* ``geometric``    -- sizes spread across scales: digit * 2**exponent;
* ``shrinking-stress`` -- a head of jobs that are large on arrival followed by
                      enough small volume that every head job ends up small
                      (stresses re-classification as the lower bound grows);
* ``adversarial``  -- the adaptive lower-bound sequence realized against a
                      concrete scheduler (params: alg, c, eps).

The same (kind, n, m, seed, params) always yields the same instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .alpha import solve_alpha
from .core import Instance, as_fraction

__all__ = ["GenSpec", "generate"]

KINDS = ("uniform", "geometric", "shrinking-stress", "adversarial")


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one reproducible instance."""

    kind: str
    n: int
    m: int
    seed: int = 0
    params: tuple[tuple[str, str], ...] = field(default=())

    def param(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.params:
            if k == key:
                return v
        return default

    @staticmethod
    def make(kind: str, n: int, m: int, seed: int = 0, **params: object) -> "GenSpec":
        items = tuple(sorted((k, str(v)) for k, v in params.items()))
        return GenSpec(kind=kind, n=n, m=m, seed=seed, params=items)


def generate(spec: GenSpec) -> Instance:
    if spec.kind not in KINDS:
        raise ValueError(f"unknown instance kind {spec.kind!r}")
    if spec.n < 1:
        raise ValueError(f"need n >= 1, got {spec.n}")
    if spec.m < 2:
        raise ValueError(f"need m >= 2, got {spec.m}")
    if spec.kind == "uniform":
        return _uniform(spec)
    if spec.kind == "geometric":
        return _geometric(spec)
    if spec.kind == "shrinking-stress":
        return _shrinking_stress(spec)
    return _adversarial(spec)


def _uniform(spec: GenSpec) -> Instance:
    rng = random.Random(spec.seed)
    lo = int(spec.param("lo", "1"))
    hi = int(spec.param("hi", "50"))
    den_max = int(spec.param("den_max", "8"))
    sizes = [
        Fraction(rng.randint(lo, hi), rng.randint(1, den_max)) for _ in range(spec.n)
    ]
    return Instance.from_sizes(spec.m, sizes)


def _geometric(spec: GenSpec) -> Instance:
    rng = random.Random(spec.seed)
    span = int(spec.param("span", "10"))
    sizes = [
        Fraction(rng.randint(1, 9)) * Fraction(2) ** rng.randint(-span, span)
        for _ in range(spec.n)
    ]
    return Instance.from_sizes(spec.m, sizes)


def _shrinking_stress(spec: GenSpec) -> Instance:
    """Head jobs sized just above the large threshold at their arrival, then a
    tail of small jobs whose volume pushes the lower bound high enough that
    every head job is small by the end.

    While fewer than 2m+1 jobs have arrived the lower bound is the average
    load, so "large on arrival" reduces to p > (alpha-1) * prev_volume /
    (m - alpha + 1); the head uses twice that.  The tail ships at least
    2m * max_head / (alpha - 1) of volume (jitter >= 0.8 included), which
    forces (alpha-1) * L_n >= 1.6 * max_head.
    """
    rng = random.Random(spec.seed)
    alpha = solve_alpha(spec.m).alpha
    head_len = min(2 * spec.m, max(1, spec.n // 2))
    sizes: list[Fraction] = []
    volume = Fraction(0)
    for _ in range(head_len):
        p = max(Fraction(1), 2 * (alpha - 1) * volume / (spec.m - alpha + 1))
        sizes.append(p)
        volume += p
    tail = spec.n - head_len
    if tail:
        base = 2 * spec.m * max(sizes) / ((alpha - 1) * tail)
        sizes.extend(
            base * Fraction(rng.randint(8, 12), 10) for _ in range(tail)
        )
    return Instance.from_sizes(spec.m, sizes)


def _adversarial(spec: GenSpec) -> Instance:
    # Imported here: the schedulers depend on core, which generate should not
    # pull in at import time for the simple kinds.
    from .adversary import play_adversary
    from .baselines import ListRun
    from .budget import BudgetRun
    from .optimal import OptimalRun

    if spec.n < 2 * spec.m:
        raise ValueError("adversarial kind needs n >= 2m (probe jobs included)")
    alg = spec.param("alg", "list")
    eps = as_fraction(spec.param("eps", "1/1000"))
    if alg == "list":
        scheduler = ListRun(spec.m)
    elif alg == "opt":
        scheduler = OptimalRun(spec.m)
    elif alg == "c":
        scheduler = BudgetRun(spec.m, as_fraction(spec.param("c", "5/3")))
    else:
        raise ValueError(f"unknown adversarial target alg {alg!r}")
    n_prime = spec.m * max(1, spec.n // spec.m - 1)
    outcome = play_adversary(scheduler, spec.m, n_prime, eps)
    return Instance(m=spec.m, jobs=outcome.sequence)
