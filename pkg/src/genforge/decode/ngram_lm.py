"""Add-k smoothed n-gram language model with a source copy-bias mixture.

This is the toy scorer backend: cheap to fit, fully deterministic, and shaped
like any other estimator (``fit`` then ``predict``).  Conditioning on the
source happens through a unigram copy distribution mixed into every step:

    P(t | ctx, source) = copy_weight * P_copy(t | source)
                       + (1 - copy_weight) * P_ngram(t | ctx)

States are immutable (context tuple + copy table), so ``extend`` is O(1) and
old states stay valid — scoring a prefix incrementally gives the same numbers
as re-scoring it from scratch.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .._validation import check_positive_int
from ..corpus import Dataset, Example, Tokenizer
from ..errors import EmptyDatasetError, ValidationError
from .scorers import BOS, EOS, NEG_INF
from .search import DecodeParams, decode


@dataclass(frozen=True)
class _State:
    context: tuple[str, ...]
    copy: tuple[tuple[int, float], ...]  # (vocab index, probability)


def _pairs(data) -> Iterable[tuple[str, str]]:
    """Yield (source, target) text pairs from datasets, examples, or tuples."""
    if isinstance(data, Dataset):
        split = "train" if "train" in data.splits else next(iter(data.splits))
        data = data.splits[split]
    for row in data:
        if isinstance(row, Example):
            for ref in row.references:
                yield row.source, ref
        else:
            source, target = row
            yield source, target


class NGramLanguageModel(BaseEstimator):
    """Order-n conditional token model; implements the scorer interface."""

    def __init__(self, order: int = 2, add_k: float = 1.0,
                 copy_weight: float = 0.3, tokenizer: Tokenizer | None = None):
        self.order = order
        self.add_k = add_k
        self.copy_weight = copy_weight
        self.tokenizer = tokenizer

    def _check_params(self):
        check_positive_int(self.order, "order")
        if self.add_k <= 0:
            raise ValidationError(f"add_k must be > 0, got {self.add_k}")
        if not 0.0 <= self.copy_weight <= 1.0:
            raise ValidationError("copy_weight must lie in [0, 1]")

    def fit(self, X, y=None):
        """Count context → token transitions over all (source, target) pairs."""
        self._check_params()
        tok = self.tokenizer or Tokenizer()
        transitions: dict[tuple[str, ...], Counter] = {}
        vocab_set: set[str] = set()
        n_rows = 0
        for source, target in _pairs(X):
            n_rows += 1
            src_tokens = tok.tokenize(source)
            tgt_tokens = tok.tokenize(target)
            vocab_set.update(src_tokens)
            vocab_set.update(tgt_tokens)
            context = (BOS,) * (self.order - 1)
            for token in list(tgt_tokens) + [EOS]:
                transitions.setdefault(context, Counter())[token] += 1
                if self.order > 1:
                    context = context[1:] + (token,)
        if n_rows == 0:
            raise EmptyDatasetError("no training pairs to fit on")
        self.vocabulary_ = [BOS, EOS] + sorted(vocab_set - {BOS, EOS})
        self.index_ = {t: i for i, t in enumerate(self.vocabulary_)}
        self.transitions_ = {
            ctx: {self.index_[t]: c for t, c in counter.items()}
            for ctx, counter in transitions.items()
        }
        self.context_totals_ = {ctx: sum(counter.values())
                                for ctx, counter in transitions.items()}
        self._tokenizer_ = tok
        self._base_cache: dict[tuple[str, ...], tuple[float, ...]] = {}
        return self

    # -- scorer interface ---------------------------------------------------

    @property
    def vocabulary(self) -> list[str]:
        check_is_fitted(self, "vocabulary_")
        return self.vocabulary_

    @property
    def eos_token(self) -> str:
        return EOS

    def begin(self, source: str) -> _State:
        check_is_fitted(self, "vocabulary_")
        counts = Counter(t for t in self._tokenizer_.tokenize(source)
                         if t in self.index_)
        total = sum(counts.values())
        copy = tuple(sorted((self.index_[t], c / total)
                            for t, c in counts.items())) if total else ()
        return _State(context=(BOS,) * (self.order - 1), copy=copy)

    def extend(self, state: _State, token: str) -> _State:
        if self.order == 1:
            return state
        return _State(context=state.context[1:] + (token,), copy=state.copy)

    def _base_dist(self, context: tuple[str, ...]) -> tuple[float, ...]:
        cached = self._base_cache.get(context)
        if cached is not None:
            return cached
        size = len(self.vocabulary_)
        emittable = size - 1  # everything except BOS
        seen = self.transitions_.get(context, {})
        total = self.context_totals_.get(context, 0)
        denom = total + self.add_k * emittable
        base = [0.0] * size
        for i in range(1, size):
            base[i] = (seen.get(i, 0) + self.add_k) / denom
        cached = tuple(base)
        self._base_cache[context] = cached
        return cached

    def log_dist(self, state: _State) -> list[float]:
        base = self._base_dist(state.context)
        lam = self.copy_weight if state.copy else 0.0
        probs = [(1.0 - lam) * p for p in base]
        for i, p in state.copy:
            probs[i] += lam * p
        return [math.log(p) if p > 0.0 else NEG_INF for p in probs]

    # -- estimator conveniences --------------------------------------------

    def predict(self, X: Sequence[str],
                params: DecodeParams | None = None) -> list[str]:
        """Decode each source text; returns space-joined token strings."""
        check_is_fitted(self, "vocabulary_")
        params = params or DecodeParams()
        return [decode(self, source, params).text for source in X]


def ngram_lm_fit(data, order: int = 2, add_k: float = 1.0,
                 copy_weight: float = 0.3,
                 tokenizer: Tokenizer | None = None) -> NGramLanguageModel:
    """Fit an :class:`NGramLanguageModel` on a dataset or pair iterable."""
    model = NGramLanguageModel(order=order, add_k=add_k,
                               copy_weight=copy_weight, tokenizer=tokenizer)
    return model.fit(data)
