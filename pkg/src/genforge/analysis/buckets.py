"""Score distributions bucketed by source length, boxplot-style."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from ..corpus import Tokenizer
from ..errors import ValidationError

DEFAULT_EDGES = (0, 256, 512, 768, 1024)


def _quantile(sorted_values: Sequence[float], q: float) -> float:
    """Linear interpolation between order statistics (numpy's default rule)."""
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    pos = q * (n - 1)
    lower = math.floor(pos)
    upper = math.ceil(pos)
    if lower == upper:
        return float(sorted_values[lower])
    frac = pos - lower
    return sorted_values[lower] * (1 - frac) + sorted_values[upper] * frac


def sample_std(values: Sequence[float]) -> float:
    """Sample standard deviation (n-1 denominator); singleton lists give 0.

    statistics.stdev works in exact rationals, so identical inputs give an
    exact 0.0 rather than accumulated rounding noise.
    """
    if len(values) < 2:
        return 0.0
    return statistics.stdev(values)


@dataclass(frozen=True)
class BucketSummary:
    low: int
    high: float  # math.inf for the overflow bucket
    count: int
    mean: float | None
    std: float | None
    min: float | None
    q1: float | None
    median: float | None
    q3: float | None
    max: float | None

    def to_json_dict(self) -> dict:
        high = None if math.isinf(self.high) else self.high
        return {"low": self.low, "high": high, "count": self.count,
                "mean": self.mean, "std": self.std, "min": self.min,
                "q1": self.q1, "median": self.median, "q3": self.q3,
                "max": self.max}


@dataclass(frozen=True)
class BucketStats:
    """Per-bucket boxplot statistics; bucket counts always sum to ``total``."""

    edges: tuple[int, ...]
    buckets: tuple[BucketSummary, ...]
    total: int

    def to_json_dict(self) -> dict:
        return {"edges": list(self.edges), "total": self.total,
                "buckets": [b.to_json_dict() for b in self.buckets]}


def _summarize(low: int, high: float, values: list[float]) -> BucketSummary:
    if not values:
        return BucketSummary(low, high, 0, None, None, None, None, None,
                             None, None)
    values = sorted(values)
    return BucketSummary(
        low=low, high=high, count=len(values),
        mean=sum(values) / len(values), std=sample_std(values),
        min=values[0], q1=_quantile(values, 0.25),
        median=_quantile(values, 0.5), q3=_quantile(values, 0.75),
        max=values[-1],
    )


def bucket_scores(sources: Sequence[str], scores: Sequence[float],
                  edges: Sequence[int] = DEFAULT_EDGES,
                  tokenizer: Tokenizer | None = None) -> BucketStats:
    """Bucket one score per record by source token length.

    Buckets are left-closed intervals between consecutive edges; lengths at or
    past the last edge (or below the first) land in the always-present
    overflow bucket.
    """
    if len(sources) != len(scores):
        raise ValidationError(
            f"{len(sources)} sources but {len(scores)} scores"
        )
    edges = tuple(edges)
    if not edges:
        raise ValidationError("edges must not be empty")
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValidationError(f"edges must be strictly increasing: {edges}")
    tokenizer = tokenizer or Tokenizer()
    n_finite = len(edges) - 1
    grouped: list[list[float]] = [[] for _ in range(n_finite + 1)]
    for source, score in zip(sources, scores):
        length = len(tokenizer.tokenize(source or ""))
        slot = n_finite  # overflow
        for i in range(n_finite):
            if edges[i] <= length < edges[i + 1]:
                slot = i
                break
        grouped[slot].append(float(score))
    buckets = [
        _summarize(edges[i], edges[i + 1], grouped[i]) for i in range(n_finite)
    ]
    buckets.append(_summarize(edges[-1], math.inf, grouped[n_finite]))
    return BucketStats(edges=edges, buckets=tuple(buckets), total=len(scores))
