"""Metric registry and the corpus evaluator with shared tokenization caches."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .._validation import check_nonempty
from ..corpus import Tokenizer, ngrams
from ..errors import ConfigError, GenforgeError
from .accuracy import exact_match, token_f1
from .bleu import BleuConfig, corpus_bleu
from .combine import combined_score, harmonic_mean
from .diversity import (
    DEFAULT_SAMPLE_CAP,
    DEFAULT_SAMPLE_SEED,
    distinct_n,
    distinct_n_per_sample,
    self_bleu,
    self_bleu_per_sample,
)
from .meteor import meteor
from .rouge import rouge_l, rouge_n


@dataclass(frozen=True)
class GenerationRecord:
    """One generated text with its references and optional source text."""

    id: str
    hypothesis: str
    references: tuple[str, ...]
    source: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "references", tuple(self.references))
        if not self.references:
            raise GenforgeError(f"record {self.id!r} has no references")


@dataclass
class MetricReport:
    """Corpus scores plus per-sample lists, optionally mean/std across runs."""

    corpus: dict[str, float]
    per_sample: dict[str, list[float]]
    n: int
    ids: list[str] = field(default_factory=list)
    mean: dict[str, float] | None = None
    std: dict[str, float] | None = None

    def to_json_dict(self) -> dict:
        out = {"corpus": dict(self.corpus),
               "per_sample": {k: list(v) for k, v in self.per_sample.items()},
               "n": self.n}
        if self.mean is not None:
            out["mean"] = dict(self.mean)
        if self.std is not None:
            out["std"] = dict(self.std)
        return out


def format_score(value: float) -> str:
    """Render a [0, 1] score the conventional way: x100, two decimals."""
    return f"{100.0 * value:.2f}"


class _EvalContext:
    """Tokenizations and n-gram counters shared by every requested metric."""

    def __init__(self, records: Sequence[GenerationRecord], tokenizer: Tokenizer,
                 side_scores: dict | None,
                 self_bleu_cap: int | None, self_bleu_seed: int):
        self.records = list(records)
        self.tokenizer = tokenizer
        self.side_scores = side_scores or {}
        self.self_bleu_cap = self_bleu_cap
        self.self_bleu_seed = self_bleu_seed
        self._tokens: dict[str, list[str]] = {}
        self._grams: dict[tuple[str, int], dict] = {}
        self.hyps = [self.tokens(r.hypothesis) for r in self.records]
        self.refs = [[self.tokens(t) for t in r.references] for r in self.records]

    def tokens(self, text: str) -> list[str]:
        cached = self._tokens.get(text)
        if cached is None:
            cached = self._tokens[text] = self.tokenizer.tokenize(text)
        return cached

    def grams(self, text: str, n: int):
        key = (text, n)
        cached = self._grams.get(key)
        if cached is None:
            cached = self._grams[key] = ngrams(self.tokens(text), n)
        return cached

    def hyp_counts(self, max_n: int):
        return [[self.grams(r.hypothesis, n) for n in range(1, max_n + 1)]
                for r in self.records]

    def ref_counts(self, max_n: int):
        return [[[self.grams(t, n) for n in range(1, max_n + 1)]
                 for t in r.references] for r in self.records]

    def side(self, key: str, metric: str) -> float:
        if key not in self.side_scores:
            raise ConfigError(
                f"metric {metric!r} needs side score {key!r}; pass side_scores"
            )
        return float(self.side_scores[key])


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _bleu_metric(max_n: int):
    def compute(ctx: _EvalContext):
        cfg = BleuConfig(max_n=max_n)
        result = corpus_bleu(ctx.hyps, ctx.refs, cfg,
                             hyp_counts=ctx.hyp_counts(max_n),
                             ref_counts=ctx.ref_counts(max_n))
        return result.score, list(result.per_sample)
    return compute


def _rouge_n_metric(n: int):
    def compute(ctx: _EvalContext):
        scores = [
            rouge_n(ctx.hyps[i], ctx.refs[i], n,
                    hyp_counts=ctx.grams(rec.hypothesis, n),
                    ref_counts=[ctx.grams(t, n) for t in rec.references]).f1
            for i, rec in enumerate(ctx.records)
        ]
        return _mean(scores), scores
    return compute


def _rouge_l_metric(ctx: _EvalContext):
    scores = [rouge_l(h, r).f1 for h, r in zip(ctx.hyps, ctx.refs)]
    return _mean(scores), scores


def _meteor_metric(ctx: _EvalContext):
    scores = [meteor(h, r) for h, r in zip(ctx.hyps, ctx.refs)]
    return _mean(scores), scores


def _distinct_metric(n: int):
    def compute(ctx: _EvalContext):
        return distinct_n(ctx.hyps, n), distinct_n_per_sample(ctx.hyps, n)
    return compute


def _self_bleu_metric(ctx: _EvalContext):
    corpus = self_bleu(ctx.hyps, sample_cap=ctx.self_bleu_cap,
                       seed=ctx.self_bleu_seed)
    return corpus, self_bleu_per_sample(ctx.hyps)


def _exact_match_metric(ctx: _EvalContext):
    scores = [float(exact_match(r.hypothesis, r.references)) for r in ctx.records]
    return _mean(scores), scores


def _token_f1_metric(ctx: _EvalContext):
    scores = [token_f1(r.hypothesis, r.references) for r in ctx.records]
    return _mean(scores), scores


def _combined_metric(ctx: _EvalContext):
    bleu4, _ = _bleu_metric(4)(ctx)
    value = combined_score(ctx.side("inform", "combined-score"),
                           ctx.side("success", "combined-score"),
                           100.0 * bleu4)
    return value, None


def _harmonic_metric(ctx: _EvalContext):
    bleu4, _ = _bleu_metric(4)(ctx)
    value = harmonic_mean(100.0 * bleu4, ctx.side("accuracy", "harmonic-mean"))
    return value, None


_Compute = Callable[[_EvalContext], tuple[float, list[float] | None]]

REGISTRY: dict[str, _Compute] = {"bleu": _bleu_metric(4)}
for _n in (1, 2, 3, 4):
    REGISTRY[f"bleu-{_n}"] = _bleu_metric(_n)
    REGISTRY[f"distinct-{_n}"] = _distinct_metric(_n)
for _n in (1, 2):
    REGISTRY[f"rouge-{_n}"] = _rouge_n_metric(_n)
REGISTRY["rouge-l"] = _rouge_l_metric
REGISTRY["meteor"] = _meteor_metric
REGISTRY["self-bleu"] = _self_bleu_metric
REGISTRY["exact-match"] = _exact_match_metric
REGISTRY["token-f1"] = _token_f1_metric
REGISTRY["combined-score"] = _combined_metric
REGISTRY["harmonic-mean"] = _harmonic_metric


REGISTRY_NAMES = tuple(sorted(REGISTRY))


def metric_names() -> list[str]:
    return list(REGISTRY_NAMES)


def evaluate(records: Sequence[GenerationRecord], metrics: Sequence[str],
             tokenizer: Tokenizer | None = None,
             side_scores: dict | None = None,
             self_bleu_cap: int | None = DEFAULT_SAMPLE_CAP,
             self_bleu_seed: int = DEFAULT_SAMPLE_SEED) -> MetricReport:
    """Compute every requested metric over one shared tokenization pass.

    Combiner metrics (``combined-score``, ``harmonic-mean``) consume
    ``side_scores`` entries and report only a corpus-level value.
    """
    check_nonempty(records, "records")
    check_nonempty(metrics, "metrics")
    unknown = [m for m in metrics if m not in REGISTRY]
    if unknown:
        raise ConfigError(
            f"unknown metric(s) {unknown}; valid names: {', '.join(metric_names())}"
        )
    ctx = _EvalContext(records, tokenizer or Tokenizer(), side_scores,
                       self_bleu_cap, self_bleu_seed)
    corpus: dict[str, float] = {}
    per_sample: dict[str, list[float]] = {}
    for name in metrics:
        value, samples = REGISTRY[name](ctx)
        corpus[name] = value
        if samples is not None:
            per_sample[name] = samples
    return MetricReport(corpus=corpus, per_sample=per_sample,
                        n=len(ctx.records), ids=[r.id for r in ctx.records])
