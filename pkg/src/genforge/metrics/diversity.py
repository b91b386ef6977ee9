"""Lexical diversity over a corpus of generated texts: distinct-n, self-BLEU."""

from __future__ import annotations

import random
from bisect import bisect_left
from collections import Counter
from typing import Sequence

from .._validation import check_positive_int
from ..corpus import TokenSeq, ngrams
from ..errors import GenforgeError, UndefinedMetricError
from .bleu import BleuConfig, score_from_stats

DEFAULT_SAMPLE_CAP = 1000
DEFAULT_SAMPLE_SEED = 2020


def distinct_n(hyps: Sequence[TokenSeq], n: int) -> float:
    """Pooled |unique n-grams| / |total n-grams| across the whole corpus."""
    check_positive_int(n, "n")
    seen: set = set()
    total = 0
    for hyp in hyps:
        total += max(0, len(hyp) - n + 1)
        seen.update(tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1))
    if total == 0:
        raise UndefinedMetricError(
            f"distinct-{n} undefined: no hypothesis has {n} or more tokens"
        )
    return len(seen) / total


def distinct_n_per_sample(hyps: Sequence[TokenSeq], n: int) -> list[float]:
    """Within-hypothesis distinct ratio; 0.0 where the text is too short."""
    check_positive_int(n, "n")
    out = []
    for hyp in hyps:
        total = max(0, len(hyp) - n + 1)
        out.append(len(ngrams(hyp, n)) / total if total else 0.0)
    return out


class _LeaveOneOutClip:
    """Per-record clipped counts and closest lengths against all other records.

    For every n-gram the clip for record i is the maximum count over j != i,
    derived from the global top-two counts instead of rescanning the corpus.
    """

    def __init__(self, hyps: Sequence[TokenSeq], max_n: int):
        self.counts = [[ngrams(h, n) for n in range(1, max_n + 1)] for h in hyps]
        # gram -> [top count, #records attaining it, second-best count]
        self.tables: list[dict] = []
        for order in range(max_n):
            table: dict = {}
            for rec in self.counts:
                for gram, cnt in rec[order].items():
                    entry = table.get(gram)
                    if entry is None:
                        table[gram] = [cnt, 1, 0]
                    elif cnt > entry[0]:
                        entry[2] = entry[0]
                        entry[0], entry[1] = cnt, 1
                    elif cnt == entry[0]:
                        entry[1] += 1
                    elif cnt > entry[2]:
                        entry[2] = cnt
            self.tables.append(table)
        self.lengths = sorted(len(h) for h in hyps)
        self.length_count = Counter(len(h) for h in hyps)

    def clip(self, i: int, order: int, gram, own: int) -> int:
        top, attain, second = self.tables[order][gram]
        if own == top and attain == 1:
            return second
        return top

    def closest_other_length(self, i: int, c: int) -> int:
        # nearest length among the other records; ties prefer the shorter
        if self.length_count[c] >= 2:
            return c
        lengths = self.lengths
        pos = bisect_left(lengths, c)
        candidates = []
        if pos > 0:
            candidates.append(lengths[pos - 1])
        if pos + 1 < len(lengths):
            candidates.append(lengths[pos + 1])
        if not candidates:  # pragma: no cover - needs >=2 records by contract
            return c
        return min(candidates, key=lambda r: (abs(r - c), r))


def self_bleu_per_sample(hyps: Sequence[TokenSeq],
                         config: BleuConfig | None = None,
                         indices: Sequence[int] | None = None) -> list[float]:
    """BLEU of each selected hypothesis against all others as references."""
    if len(hyps) < 2:
        raise GenforgeError("self-BLEU needs at least 2 hypotheses")
    config = config or BleuConfig()
    helper = _LeaveOneOutClip(hyps, config.max_n)
    if indices is None:
        indices = range(len(hyps))
    scores = []
    for i in indices:
        hyp = hyps[i]
        c = len(hyp)
        r = helper.closest_other_length(i, c)
        matched = [0] * config.max_n
        total = [0] * config.max_n
        for order in range(config.max_n):
            total[order] = max(0, c - order)
            matched[order] = sum(
                min(cnt, helper.clip(i, order, gram, cnt))
                for gram, cnt in helper.counts[i][order].items()
            )
        scores.append(score_from_stats(matched, total, c, r, config))
    return scores


def self_bleu(hyps: Sequence[TokenSeq], config: BleuConfig | None = None,
              sample_cap: int | None = DEFAULT_SAMPLE_CAP,
              seed: int = DEFAULT_SAMPLE_SEED) -> float:
    """Mean self-BLEU; the averaged set is capped by seeded sampling."""
    if len(hyps) < 2:
        raise GenforgeError("self-BLEU needs at least 2 hypotheses")
    if sample_cap is not None and sample_cap < 1:
        raise GenforgeError("sample_cap must be >= 1 or None")
    indices: Sequence[int] = range(len(hyps))
    if sample_cap is not None and len(hyps) > sample_cap:
        indices = sorted(random.Random(seed).sample(range(len(hyps)), sample_cap))
    scores = self_bleu_per_sample(hyps, config, indices)
    return sum(scores) / len(scores)
