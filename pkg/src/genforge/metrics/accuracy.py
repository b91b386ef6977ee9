"""Answer-accuracy metrics over normalized strings: exact match and token F1."""

from __future__ import annotations

import re
import string
from collections import Counter
from typing import Sequence

from .._validation import check_choice, check_nonempty

NORMALIZERS = ("none", "squad")

_ARTICLES_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def squad_normalize(text: str) -> str:
    """Lowercase, drop punctuation and articles, collapse whitespace."""
    text = text.lower().translate(_PUNCT_TABLE)
    text = _ARTICLES_RE.sub(" ", text)
    return " ".join(text.split())


def _normalize(text: str, normalizer: str) -> str:
    check_choice(normalizer, "normalizer", NORMALIZERS)
    return squad_normalize(text) if normalizer == "squad" else text


def exact_match(hyp: str, refs: Sequence[str], normalizer: str = "squad") -> int:
    """1 iff the normalized hypothesis equals any normalized reference."""
    check_nonempty(refs, "references")
    h = _normalize(hyp, normalizer)
    return int(any(h == _normalize(r, normalizer) for r in refs))


def token_f1(hyp: str, refs: Sequence[str], normalizer: str = "squad") -> float:
    """Bag-of-tokens overlap F1, best reference wins.

    Both sides empty after normalization counts as a perfect 1.0; exactly one
    empty side scores 0.
    """
    check_nonempty(refs, "references")
    hyp_tokens = _normalize(hyp, normalizer).split()
    best = 0.0
    for ref in refs:
        ref_tokens = _normalize(ref, normalizer).split()
        if not hyp_tokens and not ref_tokens:
            score = 1.0
        elif not hyp_tokens or not ref_tokens:
            score = 0.0
        else:
            common = sum((Counter(hyp_tokens) & Counter(ref_tokens)).values())
            if common == 0:
                score = 0.0
            else:
                p = common / len(hyp_tokens)
                r = common / len(ref_tokens)
                score = 2.0 * p * r / (p + r)
        best = max(best, score)
    return best
