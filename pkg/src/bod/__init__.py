"""bod: interactive, utility-function-free data discovery.

Augment several datasets into one table, scale every column to (0, 1], and
iteratively narrow the tuple set from round-by-round attribute rankings,
without ever asking for the user's utility function.
"""

from .bench import (
    BenchReport,
    BenchRow,
    SimulatedUser,
    SynthConfig,
    generate_synthetic,
    run_benchmark,
    simulate_ranking,
)
from .engine import (
    RoundChoice,
    RoundResult,
    Session,
    SessionStatus,
    finish_session,
    max_rounds,
    pending_datasets,
    start_session,
    submit_round,
)
from .errors import BodError
from .oracle import replay_oracle
from .table import (
    AugmentedTable,
    ColumnRef,
    Dataset,
    TupleSubset,
    augment,
    parse_dataset,
    scale_columns,
    total_utility,
    write_subset_csv,
)

__all__ = [
    "AugmentedTable",
    "BenchReport",
    "BenchRow",
    "BodError",
    "ColumnRef",
    "Dataset",
    "RoundChoice",
    "RoundResult",
    "Session",
    "SessionStatus",
    "SimulatedUser",
    "SynthConfig",
    "TupleSubset",
    "augment",
    "finish_session",
    "generate_synthetic",
    "max_rounds",
    "parse_dataset",
    "pending_datasets",
    "replay_oracle",
    "run_benchmark",
    "scale_columns",
    "simulate_ranking",
    "start_session",
    "submit_round",
    "total_utility",
    "write_subset_csv",
]
