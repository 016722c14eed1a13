"""Run reports and their CSV serialization.

Fractions are serialized as ``num/den`` (always with an explicit denominator)
so the CSV schema is stable; a decimal convenience rendering at 10 significant
digits accompanies the exact columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction

__all__ = [
    "REPORT_CSV_HEADER",
    "RunReport",
    "frac_dec",
    "frac_str",
    "report_csv_row",
]

DEC_DIGITS = 10


def frac_str(x: Fraction | None) -> str:
    if x is None:
        return ""
    return f"{x.numerator}/{x.denominator}"


def frac_dec(x: Fraction | None, digits: int = DEC_DIGITS) -> str:
    if x is None:
        return ""
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


@dataclass(frozen=True)
class RunReport:
    """Outcome of one scheduler run on one instance.

    ``violations`` is empty on success; soft bound violations are recorded
    here while hard invariant failures raise ``InvariantViolation`` instead.
    """

    alg: str
    m: int
    n: int
    makespan: Fraction
    lower_bound: Fraction
    opt: Fraction | None
    migrations: int
    per_machine_removals: tuple[int, ...]
    violations: tuple[str, ...]

    @property
    def ratio_vs_L(self) -> Fraction | None:
        if self.lower_bound == 0:
            return None
        return self.makespan / self.lower_bound

    @property
    def ratio_vs_opt(self) -> Fraction | None:
        if self.opt is None or self.opt == 0:
            return None
        return self.makespan / self.opt

    @property
    def ok(self) -> bool:
        return not self.violations


REPORT_CSV_HEADER = (
    "alg",
    "m",
    "n",
    "makespan",
    "makespan_dec",
    "lower_bound",
    "opt",
    "ratio_vs_L",
    "ratio_vs_L_dec",
    "ratio_vs_opt",
    "ratio_vs_opt_dec",
    "migrations",
    "per_machine_removals",
    "violations",
)


def report_csv_row(report: RunReport) -> list[str]:
    return [
        report.alg,
        str(report.m),
        str(report.n),
        frac_str(report.makespan),
        frac_dec(report.makespan),
        frac_str(report.lower_bound),
        frac_str(report.opt),
        frac_str(report.ratio_vs_L),
        frac_dec(report.ratio_vs_L),
        frac_str(report.ratio_vs_opt),
        frac_dec(report.ratio_vs_opt),
        str(report.migrations),
        "|".join(str(c) for c in report.per_machine_removals),
        "|".join(report.violations),
    ]
