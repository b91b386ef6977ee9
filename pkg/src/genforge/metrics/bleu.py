"""Corpus and sentence BLEU with clipped modified n-gram precision.

Scores live in [0, 1]. Multi-reference clipping takes, per n-gram, the
maximum count over all references; the brevity penalty uses the reference
length closest to the hypothesis length (ties broken toward the shorter
reference).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .._validation import check_choice, check_nonempty, check_positive_int
from ..corpus import TokenSeq, ngrams
from ..errors import GenforgeError

SMOOTHING_MODES = ("none", "epsilon", "add-k")


@dataclass(frozen=True)
class BleuConfig:
    """BLEU settings.

    ``epsilon`` smoothing substitutes ``epsilon / total`` for zero clipped
    counts; ``add-k`` adds ``add_k`` to numerator and denominator of orders
    n >= 2. Weights default to uniform and must sum to 1.
    """

    max_n: int = 4
    smoothing: str = "epsilon"
    epsilon: float = 0.1
    add_k: float = 1.0
    weights: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        check_positive_int(self.max_n, "max_n")
        check_choice(self.smoothing, "smoothing", SMOOTHING_MODES)
        if self.weights is None:
            object.__setattr__(
                self, "weights", tuple(1.0 / self.max_n for _ in range(self.max_n))
            )
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != self.max_n:
            raise GenforgeError(
                f"need {self.max_n} weights, got {len(self.weights)}"
            )
        if any(w < 0 for w in self.weights):
            raise GenforgeError("BLEU weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise GenforgeError(f"BLEU weights must sum to 1, got {sum(self.weights)}")


@dataclass(frozen=True)
class BleuResult:
    score: float
    per_sample: tuple[float, ...]
    precisions: tuple[float, ...]
    brevity_penalty: float


def closest_ref_length(hyp_len: int, ref_lens: Sequence[int]) -> int:
    """Reference length nearest to ``hyp_len``; ties prefer the shorter one."""
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def pair_stats(hyp: TokenSeq, refs: Sequence[TokenSeq], max_n: int,
               hyp_counts=None, ref_counts=None):
    """Per-record BLEU sufficient statistics.

    Returns ``(c, r, matched, total)`` where ``matched[i]`` / ``total[i]`` are
    the clipped and unclipped (i+1)-gram counts. Precomputed counters may be
    passed through ``hyp_counts[i]`` / ``ref_counts[j][i]`` to share work.
    """
    c = len(hyp)
    r = closest_ref_length(c, [len(ref) for ref in refs])
    matched = [0] * max_n
    total = [0] * max_n
    for i in range(max_n):
        n = i + 1
        t = max(0, c - n + 1)
        total[i] = t
        if t == 0:
            continue
        hyp_grams = hyp_counts[i] if hyp_counts is not None else ngrams(hyp, n)
        clip: dict = {}
        for j, ref in enumerate(refs):
            rc = ref_counts[j][i] if ref_counts is not None else ngrams(ref, n)
            for gram, cnt in rc.items():
                if cnt > clip.get(gram, 0):
                    clip[gram] = cnt
        matched[i] = sum(
            min(cnt, clip[gram]) for gram, cnt in hyp_grams.items() if gram in clip
        )
    return c, r, matched, total


def score_from_stats(matched: Sequence[int], total: Sequence[int], c: int, r: int,
                     config: BleuConfig) -> float:
    """Assemble BP * exp(sum w_n log p_n) from aggregated statistics."""
    if c == 0:
        return 0.0
    log_sum = 0.0
    for i, w in enumerate(config.weights):
        if w == 0.0:
            continue
        m, t = matched[i], total[i]
        if t == 0:
            return 0.0
        if m == 0:
            if config.smoothing == "epsilon":
                p = config.epsilon / t
            elif config.smoothing == "add-k" and i > 0:
                p = config.add_k / (t + config.add_k)
            else:
                return 0.0
        elif config.smoothing == "add-k" and i > 0:
            p = (m + config.add_k) / (t + config.add_k)
        else:
            p = m / t
        log_sum += w * math.log(p)
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return bp * math.exp(log_sum)


def corpus_bleu(hyps: Sequence[TokenSeq], refs: Sequence[Sequence[TokenSeq]],
                config: BleuConfig | None = None, *,
                hyp_counts=None, ref_counts=None) -> BleuResult:
    """Corpus BLEU plus per-sample sentence scores.

    ``hyps[i]`` is scored against the reference set ``refs[i]``. Optional
    ``hyp_counts`` / ``ref_counts`` supply precomputed n-gram counters indexed
    like the inputs (see :func:`pair_stats`).
    """
    config = config or BleuConfig()
    check_nonempty(hyps, "hypothesis corpus")
    if len(hyps) != len(refs):
        raise GenforgeError(
            f"got {len(hyps)} hypotheses but {len(refs)} reference sets"
        )
    max_n = config.max_n
    agg_matched = [0] * max_n
    agg_total = [0] * max_n
    agg_c = agg_r = 0
    per_sample = []
    for i, (hyp, ref_set) in enumerate(zip(hyps, refs)):
        check_nonempty(ref_set, f"references for record {i}")
        c, r, matched, total = pair_stats(
            hyp, ref_set, max_n,
            hyp_counts=hyp_counts[i] if hyp_counts is not None else None,
            ref_counts=ref_counts[i] if ref_counts is not None else None,
        )
        agg_c += c
        agg_r += r
        for n in range(max_n):
            agg_matched[n] += matched[n]
            agg_total[n] += total[n]
        per_sample.append(score_from_stats(matched, total, c, r, config))
    precisions = tuple(
        (agg_matched[n] / agg_total[n]) if agg_total[n] else 0.0 for n in range(max_n)
    )
    bp = 1.0 if (agg_c == 0 or agg_c > agg_r) else math.exp(1.0 - agg_r / agg_c)
    score = score_from_stats(agg_matched, agg_total, agg_c, agg_r, config)
    return BleuResult(score=score, per_sample=tuple(per_sample),
                      precisions=precisions, brevity_penalty=bp)


def sentence_bleu(hyp: TokenSeq, refs: Sequence[TokenSeq],
                  config: BleuConfig | None = None) -> float:
    return corpus_bleu([hyp], [refs], config).score
