"""ROUGE-N (n-gram overlap) and ROUGE-L (longest common subsequence).

All scores are plain F1 (beta = 1), no stemming. With several references
the best F1 over references wins and its precision/recall are reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .._validation import check_nonempty, check_positive_int
from ..corpus import TokenSeq, ngrams


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


_ZERO = PRF(0.0, 0.0, 0.0)


def _prf(overlap: int, hyp_total: int, ref_total: int) -> PRF:
    p = overlap / hyp_total if hyp_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f = 2.0 * p * r / (p + r) if p + r > 0 else 0.0
    return PRF(p, r, f)


def rouge_n(hyp: TokenSeq, refs: Sequence[TokenSeq], n: int,
            *, hyp_counts=None, ref_counts=None) -> PRF:
    """Best-reference n-gram overlap F1 with clipped counts."""
    check_positive_int(n, "n")
    check_nonempty(refs, "references")
    hyp_grams = hyp_counts if hyp_counts is not None else ngrams(hyp, n)
    hyp_total = max(0, len(hyp) - n + 1)
    best = _ZERO
    for j, ref in enumerate(refs):
        rc = ref_counts[j] if ref_counts is not None else ngrams(ref, n)
        ref_total = max(0, len(ref) - n + 1)
        overlap = sum(min(cnt, rc[g]) for g, cnt in hyp_grams.items() if g in rc)
        score = _prf(overlap, hyp_total, ref_total)
        if score.f1 > best.f1:
            best = score
    return best


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence, O(len(a) * len(b)) DP."""
    m, n = len(a), len(b)
    if m == 0 or n == 0:
        return 0
    prev = [0] * (n + 1)
    for i in range(m):
        cur = [0] * (n + 1)
        ai = a[i]
        for j in range(n):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            else:
                x = cur[j]
                y = prev[j + 1]
                cur[j + 1] = x if x >= y else y
        prev = cur
    return prev[n]


def rouge_l(hyp: TokenSeq, refs: Sequence[TokenSeq]) -> PRF:
    """LCS-based F1; both-empty pairs score 0 by convention."""
    check_nonempty(refs, "references")
    best = _ZERO
    for ref in refs:
        lcs = lcs_length(hyp, ref)
        score = _prf(lcs, len(hyp), len(ref))
        if score.f1 > best.f1:
            best = score
    return best
