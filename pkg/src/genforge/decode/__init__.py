"""Decoding engine: pluggable scorers, search strategies, and the toy LM."""

from .ngram_lm import NGramLanguageModel, ngram_lm_fit
from .scorers import (
    BOS,
    EOS,
    RandomTableScorer,
    Scorer,
    TableScorer,
    score_prefix,
)
from .search import (
    DecodeParams,
    Hypothesis,
    STRATEGIES,
    beam_search,
    decode,
    decode_corpus,
    exhaustive_argmax,
    greedy,
    ngram_blocklist,
    sample,
)

__all__ = [
    "NGramLanguageModel",
    "ngram_lm_fit",
    "BOS",
    "EOS",
    "RandomTableScorer",
    "Scorer",
    "TableScorer",
    "score_prefix",
    "DecodeParams",
    "Hypothesis",
    "STRATEGIES",
    "beam_search",
    "decode",
    "decode_corpus",
    "exhaustive_argmax",
    "greedy",
    "ngram_blocklist",
    "sample",
]
