"""Unigram-alignment metric with a fragmentation penalty.

Hypothesis and reference unigrams are aligned where they match exactly or
share a stem (small built-in suffix stripper; no synonym resources). Among
all maximum-cardinality alignments the one with the fewest chunks wins,
where a chunk is a maximal run of matches contiguous and in order on both
sides. Identity texts therefore score ``1 - gamma * (1/len)**beta``, not 1.
"""

from __future__ import annotations

from typing import Sequence

from .._validation import check_nonempty
from ..corpus import TokenSeq

# (suffix, replacement); first match wins, stems shorter than 3 chars are
# left alone so function words survive unchanged.
_STEM_RULES = (
    ("ies", "y"),
    ("ing", ""),
    ("ed", ""),
    ("es", ""),
    ("ly", ""),
    ("s", ""),
)

_SEARCH_BUDGET = 500_000


def simple_stem(token: str) -> str:
    for suffix, repl in _STEM_RULES:
        if token.endswith(suffix) and len(token) - len(suffix) + len(repl) >= 3:
            return token[: len(token) - len(suffix)] + repl
    return token


def _candidates(hyp: TokenSeq, ref: TokenSeq) -> list[list[int]]:
    ref_stems = [simple_stem(t) for t in ref]
    out = []
    for tok in hyp:
        stem = simple_stem(tok)
        out.append([
            j for j, (rt, rs) in enumerate(zip(ref, ref_stems))
            if tok == rt or stem == rs
        ])
    return out


def _greedy_alignment(cand: list[list[int]], n_ref: int) -> tuple[int, int]:
    # Kuhn's augmenting-path matching; used only when the exact search
    # exceeds its node budget. Maximum matches, chunks not minimized.
    match_ref = [-1] * n_ref

    def try_assign(i: int, seen: set[int]) -> bool:
        for j in cand[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_ref[j] == -1 or try_assign(match_ref[j], seen):
                match_ref[j] = i
                return True
        return False

    for i in range(len(cand)):
        try_assign(i, set())
    pairs = sorted((i, j) for j, i in enumerate(match_ref) if i != -1)
    return len(pairs), _count_chunks(pairs)


def _count_chunks(pairs: list[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for i, j in pairs:
        if prev is None or prev != (i - 1, j - 1):
            chunks += 1
        prev = (i, j)
    return chunks


def align(hyp: TokenSeq, ref: TokenSeq) -> tuple[int, int]:
    """Return (matches, chunks) of the fewest-chunks maximal alignment."""
    cand = _candidates(hyp, ref)
    # positions that can still contribute a match, for the pruning bound
    can_match = [1 if c else 0 for c in cand]
    suffix_potential = [0] * (len(cand) + 1)
    for i in range(len(cand) - 1, -1, -1):
        suffix_potential[i] = suffix_potential[i + 1] + can_match[i]

    best = [0, 0]  # matches, chunks
    used = [False] * len(ref)
    nodes = 0

    def search(i: int, matches: int, chunks: int, last: tuple[int, int] | None):
        nonlocal nodes
        nodes += 1
        if nodes > _SEARCH_BUDGET:
            raise _BudgetExceeded
        if i == len(cand):
            if matches > best[0] or (matches == best[0] and chunks < best[1]):
                best[0], best[1] = matches, chunks
            return
        bound = matches + suffix_potential[i]
        if bound < best[0]:
            return
        if bound == best[0] and chunks >= best[1] and best[0] > 0:
            return
        for j in cand[i]:
            if used[j]:
                continue
            used[j] = True
            extra = 0 if last == (i - 1, j - 1) else 1
            search(i + 1, matches + 1, chunks + extra, (i, j))
            used[j] = False
        search(i + 1, matches, chunks, last)

    try:
        search(0, 0, 0, None)
        return best[0], best[1]
    except _BudgetExceeded:
        return _greedy_alignment(cand, len(ref))


class _BudgetExceeded(Exception):
    pass


def meteor(hyp: TokenSeq, refs: Sequence[TokenSeq], alpha: float = 0.9,
           beta: float = 3.0, gamma: float = 0.5) -> float:
    """Best-reference score in [0, 1]; zero matches (or empty texts) give 0."""
    check_nonempty(refs, "references")
    best = 0.0
    for ref in refs:
        if not hyp or not ref:
            continue
        matches, chunks = align(hyp, ref)
        if matches == 0:
            continue
        p = matches / len(hyp)
        r = matches / len(ref)
        fmean = p * r / (alpha * p + (1.0 - alpha) * r)
        penalty = gamma * (chunks / matches) ** beta
        best = max(best, fmean * (1.0 - penalty))
    return best
