"""Lexical evaluation metrics for generated text."""

from .accuracy import NORMALIZERS, exact_match, squad_normalize, token_f1
from .bleu import (
    BleuConfig,
    BleuResult,
    closest_ref_length,
    corpus_bleu,
    sentence_bleu,
)
from .combine import combined_score, harmonic_mean
from .diversity import (
    distinct_n,
    distinct_n_per_sample,
    self_bleu,
    self_bleu_per_sample,
)
from .meteor import align, meteor, simple_stem
from .report import (
    REGISTRY,
    GenerationRecord,
    MetricReport,
    evaluate,
    format_score,
    metric_names,
)
from .rouge import PRF, lcs_length, rouge_l, rouge_n

__all__ = [
    "NORMALIZERS",
    "exact_match",
    "squad_normalize",
    "token_f1",
    "BleuConfig",
    "BleuResult",
    "closest_ref_length",
    "corpus_bleu",
    "sentence_bleu",
    "combined_score",
    "harmonic_mean",
    "distinct_n",
    "distinct_n_per_sample",
    "self_bleu",
    "self_bleu_per_sample",
    "align",
    "meteor",
    "simple_stem",
    "REGISTRY",
    "GenerationRecord",
    "MetricReport",
    "evaluate",
    "format_score",
    "metric_names",
    "PRF",
    "lcs_length",
    "rouge_l",
    "rouge_n",
]
