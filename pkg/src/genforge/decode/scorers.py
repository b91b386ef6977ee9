"""Scorer protocol plus table-backed scorers used for testing and oracles.

A scorer is a pure conditional distribution over its vocabulary: ``begin``
starts a state from the source text, ``extend`` returns a new state (the old
one stays valid), and ``log_dist`` gives per-token log-probabilities whose
exponentials sum to one.
"""

from __future__ import annotations

import math
import random
from typing import Any, Protocol, Sequence, runtime_checkable

from .._seeding import derive_seed
from ..errors import ValidationError

BOS = "<bos>"
EOS = "<eos>"

NEG_INF = float("-inf")


@runtime_checkable
class Scorer(Protocol):
    vocabulary: Sequence[str]
    eos_token: str

    def begin(self, source: str) -> Any: ...

    def extend(self, state: Any, token: str) -> Any: ...

    def log_dist(self, state: Any) -> Sequence[float]: ...


def score_prefix(scorer: Scorer, source: str, tokens: Sequence[str]) -> float:
    """Cumulative log-probability of emitting ``tokens`` after ``source``."""
    index = {tok: i for i, tok in enumerate(scorer.vocabulary)}
    state = scorer.begin(source)
    total = 0.0
    for tok in tokens:
        total += scorer.log_dist(state)[index[tok]]
        state = scorer.extend(state, tok)
    return total


def _log_row(probs: Sequence[float]) -> tuple[float, ...]:
    return tuple(math.log(p) if p > 0.0 else NEG_INF for p in probs)


class TableScorer:
    """Scorer defined by an explicit prefix → probability-row table.

    Rows are keyed by the tuple of tokens emitted so far; a missing prefix
    falls back to the uniform distribution.
    """

    def __init__(self, vocabulary: Sequence[str], table: dict,
                 eos_token: str = EOS):
        self.vocabulary = list(vocabulary)
        self.eos_token = eos_token
        if eos_token not in self.vocabulary:
            raise ValidationError(f"vocabulary must contain {eos_token!r}")
        self._rows = {}
        for prefix, probs in table.items():
            if len(probs) != len(self.vocabulary):
                raise ValidationError(
                    f"row for prefix {prefix!r} has {len(probs)} entries, "
                    f"expected {len(self.vocabulary)}"
                )
            if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-6:
                raise ValidationError(
                    f"row for prefix {prefix!r} is not a probability vector"
                )
            self._rows[tuple(prefix)] = _log_row(probs)
        self._uniform = _log_row([1.0 / len(self.vocabulary)]
                                 * len(self.vocabulary))

    def begin(self, source: str):
        return ()

    def extend(self, state, token: str):
        return state + (token,)

    def log_dist(self, state):
        return self._rows.get(state, self._uniform)


class RandomTableScorer:
    """Deterministic pseudo-random scorer: each prefix hashes to its own row.

    Handy for property tests — an unbounded conditional table with strictly
    positive probabilities, fully determined by (num_regular, seed).
    """

    def __init__(self, num_regular: int = 2, seed: int = 0,
                 eos_token: str = EOS):
        if num_regular < 1:
            raise ValidationError("num_regular must be >= 1")
        self.vocabulary = [f"w{i}" for i in range(num_regular)] + [eos_token]
        self.eos_token = eos_token
        self.seed = seed

    def begin(self, source: str):
        return ()

    def extend(self, state, token: str):
        return state + (token,)

    def log_dist(self, state):
        rng = random.Random(derive_seed(self.seed, "\x1f".join(state)))
        weights = [rng.random() + 0.05 for _ in self.vocabulary]
        total = sum(weights)
        return _log_row([w / total for w in weights])
