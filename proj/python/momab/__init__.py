"""Multi-objective bandits: Pareto regret, MO-KS / MO-US / Pareto UCB, reward attacks."""

from ._core import (
    CriterionResult,
    ExperimentConfig,
    OracleSummary,
    RunRecord,
    beta,
    check_bounds,
    compare,
    csv_text,
    dist,
    dist_oracle,
    load_config,
    minimax_gap,
    parse_config,
    pareto_front,
    run_experiment,
    run_oracle_suite,
    validate,
    write_csv,
)

__all__ = [
    "CriterionResult",
    "ExperimentConfig",
    "OracleSummary",
    "RunRecord",
    "beta",
    "check_bounds",
    "compare",
    "csv_text",
    "dist",
    "dist_oracle",
    "load_config",
    "minimax_gap",
    "parse_config",
    "pareto_front",
    "run_experiment",
    "run_oracle_suite",
    "validate",
    "write_csv",
]
