"""Online makespan minimization on identical machines with bounded job migration.

Public surface: exact competitive-ratio constants (``solve_alpha``,
``limit_constant``), the migration-optimal scheduler (``run_alg_opt``), the
migration-budget family (``run_alg_c``), baselines and exact oracles
(``run_list``, ``opt_makespan``, ``pairing_opt``), the adaptive lower-bound
game (``play_adversary``), and reproducible instance generation/batching.
"""

from .adversary import AdversaryOutcome, OnlineScheduler, play_adversary, sweep_adversary
from .alpha import (
    RatioProfile,
    cesaro_gap,
    harmonic,
    limit_constant,
    profile_load,
    removal_cap,
    solve_alpha,
)
from .baselines import (
    ListRun,
    OracleGuardError,
    lpt_makespan,
    opt_makespan,
    oracle_guard,
    pairing_opt,
    run_list,
)
from .batch import BatchResult, batch, to_csv
from .budget import BudgetRun, run_alg_c
from .core import (
    Assign,
    BudgetBoundTracker,
    Instance,
    InvariantViolation,
    Job,
    MachineState,
    Migrate,
    OptBoundTracker,
    ScheduleState,
    as_fraction,
    format_instance,
    least_loaded,
    load_instance,
    load_trace,
    parse_instance,
    replay,
    save_instance,
    save_trace,
    small_load,
)
from .generate import GenSpec, generate
from .optimal import OptimalRun, run_alg_opt
from .report import RunReport

__version__ = "0.1.0"

__all__ = [
    "AdversaryOutcome",
    "Assign",
    "BatchResult",
    "BudgetBoundTracker",
    "BudgetRun",
    "GenSpec",
    "Instance",
    "InvariantViolation",
    "Job",
    "ListRun",
    "MachineState",
    "Migrate",
    "OnlineScheduler",
    "OptBoundTracker",
    "OptimalRun",
    "OracleGuardError",
    "RatioProfile",
    "RunReport",
    "ScheduleState",
    "as_fraction",
    "batch",
    "cesaro_gap",
    "format_instance",
    "generate",
    "harmonic",
    "least_loaded",
    "limit_constant",
    "load_instance",
    "load_trace",
    "lpt_makespan",
    "opt_makespan",
    "oracle_guard",
    "pairing_opt",
    "parse_instance",
    "play_adversary",
    "profile_load",
    "removal_cap",
    "replay",
    "run_alg_c",
    "run_alg_opt",
    "run_list",
    "save_instance",
    "save_trace",
    "small_load",
    "solve_alpha",
    "sweep_adversary",
    "to_csv",
]
