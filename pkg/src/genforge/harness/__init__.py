"""Experiment harness: configs, seed-repeated runs, grid/random search."""

from .config import (
    DEFAULT_SEEDS,
    ExperimentConfig,
    config_to_text,
    load_config,
    parse_config_text,
)
from .search import (
    Range,
    SearchOutcome,
    SearchSpace,
    TrialResult,
    WORKERS_ENV,
    aggregate_seeds,
    best_config_text,
    grid_search,
    random_search,
    results_to_json,
    results_to_tsv,
    resolve_workers,
    run_experiment,
    write_search_outputs,
)

__all__ = [
    "DEFAULT_SEEDS",
    "ExperimentConfig",
    "config_to_text",
    "load_config",
    "parse_config_text",
    "Range",
    "SearchOutcome",
    "SearchSpace",
    "TrialResult",
    "WORKERS_ENV",
    "aggregate_seeds",
    "best_config_text",
    "grid_search",
    "random_search",
    "results_to_json",
    "results_to_tsv",
    "resolve_workers",
    "run_experiment",
    "write_search_outputs",
]
