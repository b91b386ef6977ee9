"""Side-by-side comparison of two models' reports on the same records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..corpus import Tokenizer
from ..errors import AlignmentError, ConfigError
from ..metrics.report import GenerationRecord, MetricReport
from .buckets import DEFAULT_EDGES, BucketStats, bucket_scores
from .copyrate import DEFAULT_ORDERS, copy_rate_profile


@dataclass(frozen=True)
class WinnerCounts:
    a: int
    b: int
    ties: int

    def to_json_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "ties": self.ties}


@dataclass
class ModelComparison:
    """Deltas, per-bucket winner counts, and copy-rate curves for A vs B.

    ``copying`` is True when A copies strictly more of the source than B at
    every n-gram order — the signature of a model that reproduces its input
    instead of abstracting it.
    """

    metric: str
    deltas: dict[str, float]
    overall: WinnerCounts
    per_bucket: list[dict]
    buckets_a: BucketStats
    buckets_b: BucketStats
    copy_rate_a: dict[int, float | None]
    copy_rate_b: dict[int, float | None]
    copying: bool
    n: int

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric,
            "deltas": dict(self.deltas),
            "overall": self.overall.to_json_dict(),
            "per_bucket": [dict(row) for row in self.per_bucket],
            "buckets_a": self.buckets_a.to_json_dict(),
            "buckets_b": self.buckets_b.to_json_dict(),
            "copy_rate_a": {str(k): v for k, v in self.copy_rate_a.items()},
            "copy_rate_b": {str(k): v for k, v in self.copy_rate_b.items()},
            "copying": self.copying,
            "n": self.n,
        }


def _count_wins(pairs: Sequence[tuple[float, float]]) -> WinnerCounts:
    a = sum(1 for x, y in pairs if x > y)
    b = sum(1 for x, y in pairs if y > x)
    return WinnerCounts(a=a, b=b, ties=len(pairs) - a - b)


def compare_models(records_a: Sequence[GenerationRecord],
                   records_b: Sequence[GenerationRecord],
                   report_a: MetricReport, report_b: MetricReport,
                   metric: str,
                   edges: Sequence[int] = DEFAULT_EDGES,
                   tokenizer: Tokenizer | None = None) -> ModelComparison:
    """Compare two models evaluated on the same ids with the same metrics."""
    ids_a = [r.id for r in records_a]
    ids_b = [r.id for r in records_b]
    if set(ids_a) != set(ids_b):
        missing_a = sorted(set(ids_b) - set(ids_a))
        missing_b = sorted(set(ids_a) - set(ids_b))
        raise AlignmentError(
            f"record ids differ: missing from A {missing_a}, "
            f"missing from B {missing_b}"
        )
    by_id_b = {r.id: i for i, r in enumerate(records_b)}
    order_b = [by_id_b[i] for i in ids_a]  # align B to A's record order

    for report, name in ((report_a, "A"), (report_b, "B")):
        if metric not in report.per_sample:
            raise ConfigError(
                f"report {name} has no per-sample scores for {metric!r}"
            )
    scores_a = report_a.per_sample[metric]
    scores_b = [report_b.per_sample[metric][i] for i in order_b]

    deltas = {
        name: report_a.corpus[name] - report_b.corpus[name]
        for name in report_a.corpus if name in report_b.corpus
    }

    tokenizer = tokenizer or Tokenizer()
    sources = [r.source or "" for r in records_a]
    buckets_a = bucket_scores(sources, scores_a, edges, tokenizer)
    buckets_b = bucket_scores(sources, scores_b, edges, tokenizer)

    # winner counts within each source-length bucket
    lengths = [len(tokenizer.tokenize(s)) for s in sources]
    n_finite = len(tuple(edges)) - 1
    slots: list[list[tuple[float, float]]] = [[] for _ in range(n_finite + 1)]
    for length, pair in zip(lengths, zip(scores_a, scores_b)):
        slot = n_finite
        for i in range(n_finite):
            if edges[i] <= length < edges[i + 1]:
                slot = i
                break
        slots[slot].append(pair)
    per_bucket = []
    for summary, pairs in zip(buckets_a.buckets, slots):
        wins = _count_wins(pairs)
        per_bucket.append({"low": summary.low,
                           "high": None if summary.high == float("inf")
                           else summary.high,
                           **wins.to_json_dict()})

    hyp_tokens_a = [tokenizer.tokenize(r.hypothesis) for r in records_a]
    hyp_tokens_b = [tokenizer.tokenize(records_b[i].hypothesis)
                    for i in order_b]
    source_tokens = [tokenizer.tokenize(s) for s in sources]
    curve_a = copy_rate_profile(hyp_tokens_a, source_tokens)
    curve_b = copy_rate_profile(hyp_tokens_b, source_tokens)
    copying = all(
        curve_a[n] is not None and curve_b[n] is not None
        and curve_a[n] > curve_b[n]
        for n in DEFAULT_ORDERS
    )

    return ModelComparison(
        metric=metric, deltas=deltas,
        overall=_count_wins(list(zip(scores_a, scores_b))),
        per_bucket=per_bucket, buckets_a=buckets_a, buckets_b=buckets_b,
        copy_rate_a=curve_a, copy_rate_b=curve_b, copying=copying,
        n=len(records_a),
    )
