"""Seed-repeated experiment runner with grid and random hyper-parameter search.

A trial = one parameter assignment run once per seed (fit toy scorer, decode
the eval split, score it).  Trials are independent, so they may run on a
bounded worker pool; the results table is assembled in trial-index order and
is byte-identical for any worker count.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

from ..analysis.buckets import sample_std
from ..corpus import Dataset, open_dataset
from ..decode.ngram_lm import NGramLanguageModel
from ..decode.search import decode_corpus
from ..errors import AlignmentError, ConfigError, StageError, ValidationError
from ..metrics.report import GenerationRecord, MetricReport, evaluate
from .config import ExperimentConfig, config_to_text, load_config

WORKERS_ENV = "GENFORGE_WORKERS"

_RANGE_RE = re.compile(
    r"^range\(\s*([^,\s)]+)\s*,\s*([^,\s)]+)\s*(?:,\s*(linear|log)\s*)?\)$"
)


@dataclass(frozen=True)
class Range:
    """Continuous search interval, sampled on a linear or log scale."""

    lo: float
    hi: float
    scale: str = "linear"

    def __post_init__(self):
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"scale must be linear or log, got {self.scale!r}")
        if not self.lo < self.hi:
            raise ValidationError(f"range needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.scale == "log" and self.lo <= 0:
            raise ValidationError("log-scale range needs lo > 0")

    def draw(self, rng: random.Random) -> float:
        if self.scale == "log":
            return math.exp(rng.uniform(math.log(self.lo), math.log(self.hi)))
        return rng.uniform(self.lo, self.hi)


@dataclass(frozen=True)
class SearchSpace:
    """Parameter name → explicit value list or a :class:`Range`."""

    params: dict

    def __post_init__(self):
        if not self.params:
            raise ValidationError("search space has no parameters")
        for name, values in self.params.items():
            if isinstance(values, Range):
                continue
            if not isinstance(values, (list, tuple)) or not values:
                raise ValidationError(
                    f"space parameter {name!r} needs a nonempty value list "
                    "or a range(lo, hi, scale)"
                )

    @classmethod
    def from_flat(cls, flat: Mapping) -> "SearchSpace":
        params: dict = {}
        for name, value in flat.items():
            if isinstance(value, str):
                match = _RANGE_RE.match(value)
                if not match:
                    raise ConfigError(
                        f"space parameter {name!r}: expected a JSON list or "
                        f"range(lo, hi[, scale]), got {value!r}"
                    )
                lo, hi, scale = match.groups()
                params[name] = Range(float(lo), float(hi), scale or "linear")
            else:
                params[name] = value
        return cls(params=params)

    @classmethod
    def from_file(cls, path) -> "SearchSpace":
        return cls.from_flat(load_config(path))

    def names(self) -> list[str]:
        return sorted(self.params)


@dataclass
class TrialResult:
    """One assignment's per-seed objective values and aggregate."""

    assignment: dict
    per_seed: list[float]
    mean: float
    std: float
    reports: list[MetricReport] = field(default_factory=list, repr=False)
    wall_time: float = 0.0  # informational; never written to result tables

    def to_json_dict(self) -> dict:
        return {"assignment": dict(self.assignment),
                "per_seed": list(self.per_seed),
                "mean": self.mean, "std": self.std}


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def aggregate_seeds(reports: Sequence[MetricReport]
                    ) -> tuple[dict[str, float], dict[str, float]]:
    """Elementwise mean and sample std of per-seed corpus scores."""
    if not reports:
        raise AlignmentError("no reports to aggregate")
    names = set(reports[0].corpus)
    for report in reports[1:]:
        if set(report.corpus) != names:
            raise AlignmentError(
                f"metric sets differ: {sorted(names)} vs "
                f"{sorted(report.corpus)}"
            )
    mean = {}
    std = {}
    for name in sorted(names):
        values = [r.corpus[name] for r in reports]
        mean[name] = sum(values) / len(values)
        std[name] = sample_std(values)
    return mean, std


def run_experiment(config: ExperimentConfig,
                   dataset: Dataset | None = None) -> TrialResult:
    """Fit, decode, and evaluate once per seed; aggregate the objective."""
    start = time.perf_counter()
    with _stage("load"):
        if dataset is None:
            dataset = open_dataset(config.dataset, split=config.split)
        examples = dataset[config.split]
    with _stage("fit"):
        train = dataset.splits.get("train", examples)
        model = NGramLanguageModel(**config.model_params()).fit(train)
    per_seed: list[float] = []
    reports: list[MetricReport] = []
    for seed in config.seeds:
        with _stage("decode"):
            hyps = decode_corpus(model, [ex.source for ex in examples],
                                 config.decode_params(seed))
        with _stage("evaluate"):
            records = [
                GenerationRecord(id=ex.id, hypothesis=hyp.text,
                                 references=ex.references, source=ex.source)
                for ex, hyp in zip(examples, hyps)
            ]
            report = evaluate(records, config.metrics, self_bleu_seed=seed)
        if config.objective not in report.corpus:
            raise StageError("evaluate",
                             f"objective {config.objective!r} missing from report")
        per_seed.append(report.corpus[config.objective])
        reports.append(report)
    return TrialResult(
        assignment={}, per_seed=per_seed,
        mean=sum(per_seed) / len(per_seed), std=sample_std(per_seed),
        reports=reports, wall_time=time.perf_counter() - start,
    )


def resolve_workers(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


def _assignment_key(assignment: Mapping) -> str:
    return json.dumps(assignment, sort_keys=True)


def _run_assignments(assignments: Sequence[dict], config: ExperimentConfig,
                     workers: int | None, dataset: Dataset | None
                     ) -> list[TrialResult]:
    configs = [config.with_overrides(a) for a in assignments]
    if dataset is None and config.dataset:
        with _stage("load"):
            dataset = open_dataset(config.dataset, split=config.split)
    count = resolve_workers(workers)
    if count == 1 or len(configs) == 1:
        outcomes = [run_experiment(c, dataset) for c in configs]
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            futures = [pool.submit(run_experiment, c, dataset)
                       for c in configs]
            outcomes = [f.result() for f in futures]  # trial-index order
    return [replace(trial, assignment=dict(assignment))
            for trial, assignment in zip(outcomes, assignments)]


def _rank(trials: list[TrialResult]) -> list[TrialResult]:
    return sorted(trials, key=lambda t: (-t.mean, t.std,
                                         _assignment_key(t.assignment)))


@dataclass
class SearchOutcome:
    trials: list[TrialResult]  # ranked best-first
    best: dict                 # best assignment


def grid_search(space: SearchSpace, config: ExperimentConfig,
                workers: int | None = None,
                dataset: Dataset | None = None) -> SearchOutcome:
    """Run the full Cartesian product of an all-lists space, ranked best-first."""
    names = space.names()
    for name in names:
        if isinstance(space.params[name], Range):
            raise ValidationError(
                f"grid search needs explicit value lists; {name!r} is a range"
            )
    assignments = [dict(zip(names, combo))
                   for combo in itertools.product(
                       *(space.params[n] for n in names))]
    if not assignments:
        raise ValidationError("search space product is empty")
    trials = _rank(_run_assignments(assignments, config, workers, dataset))
    return SearchOutcome(trials=trials, best=trials[0].assignment)


def random_search(space: SearchSpace, config: ExperimentConfig, budget: int,
                  seed: int = 0, workers: int | None = None,
                  dataset: Dataset | None = None) -> SearchOutcome:
    """Draw ``budget`` seeded assignments from the space, then rank as usual."""
    if budget < 1:
        raise ValidationError(f"budget must be >= 1, got {budget}")
    rng = random.Random(seed)
    names = space.names()
    assignments = []
    for _ in range(budget):
        assignment = {}
        for name in names:
            values = space.params[name]
            if isinstance(values, Range):
                assignment[name] = values.draw(rng)
            else:
                assignment[name] = values[rng.randrange(len(values))]
        assignments.append(assignment)
    trials = _rank(_run_assignments(assignments, config, workers, dataset))
    return SearchOutcome(trials=trials, best=trials[0].assignment)


def results_to_tsv(trials: Sequence[TrialResult]) -> str:
    """Deterministic TSV result table (rank, aggregate, assignment columns)."""
    param_names = sorted({name for t in trials for name in t.assignment})
    header = ["rank", "mean", "std", "per_seed"] + param_names
    lines = ["\t".join(header)]
    for rank, trial in enumerate(trials, start=1):
        row = [str(rank), repr(trial.mean), repr(trial.std),
               ",".join(repr(v) for v in trial.per_seed)]
        row += [json.dumps(trial.assignment.get(name))
                for name in param_names]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def results_to_json(trials: Sequence[TrialResult]) -> str:
    payload = {"results": [dict(rank=i, **t.to_json_dict())
                           for i, t in enumerate(trials, start=1)]}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def best_config_text(config: ExperimentConfig, best: Mapping) -> str:
    """Base config with the winning assignment folded in, as config-file text."""
    return config_to_text(config.with_overrides(best).to_flat())


def write_search_outputs(outcome: SearchOutcome, config: ExperimentConfig,
                         out_dir) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"tsv": out_dir / "results.tsv",
             "json": out_dir / "results.json",
             "best": out_dir / "best.cfg"}
    paths["tsv"].write_text(results_to_tsv(outcome.trials), encoding="utf-8")
    paths["json"].write_text(results_to_json(outcome.trials), encoding="utf-8")
    paths["best"].write_text(best_config_text(config, outcome.best),
                             encoding="utf-8")
    return paths
