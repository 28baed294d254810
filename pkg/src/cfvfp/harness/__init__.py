"""Experiment batches, head-to-head matches and the command-line interface."""

from .config import ConfigError, ExperimentConfig, SolverSpec, parse_budget, parse_config
from .experiment import (
    RunRecord,
    Snapshot,
    confidence_interval,
    emit_plotdata,
    run_experiment,
    run_records,
    run_trial,
    summarize,
)
from .match import MatchConfig, MatchResult, expected_match_value, run_match

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "MatchConfig",
    "MatchResult",
    "RunRecord",
    "Snapshot",
    "SolverSpec",
    "confidence_interval",
    "emit_plotdata",
    "expected_match_value",
    "parse_budget",
    "parse_config",
    "run_experiment",
    "run_match",
    "run_records",
    "run_trial",
    "summarize",
]
