"""How much of a hypothesis is lifted verbatim from its source."""

from __future__ import annotations

from typing import Sequence

from .._validation import check_positive_int
from ..corpus import TokenSeq

DEFAULT_ORDERS = (1, 2, 3, 4)


def copy_rate(hypothesis: TokenSeq, source: TokenSeq, n: int) -> float | None:
    """Fraction of hypothesis n-grams (by position) occurring in the source.

    Hypotheses shorter than ``n`` have no n-grams; the rate is undefined and
    ``None`` is returned so aggregates can skip the record.
    """
    check_positive_int(n, "n")
    total = len(hypothesis) - n + 1
    if total < 1:
        return None
    seen = {tuple(source[i:i + n]) for i in range(len(source) - n + 1)}
    hits = sum(1 for i in range(total)
               if tuple(hypothesis[i:i + n]) in seen)
    return hits / total


def copy_rate_profile(hypotheses: Sequence[TokenSeq],
                      sources: Sequence[TokenSeq],
                      orders: Sequence[int] = DEFAULT_ORDERS
                      ) -> dict[int, float | None]:
    """Mean copy rate per n-gram order, skipping undefined (too-short) rows."""
    profile: dict[int, float | None] = {}
    for n in orders:
        rates = [r for hyp, src in zip(hypotheses, sources)
                 if (r := copy_rate(hyp, src, n)) is not None]
        profile[n] = sum(rates) / len(rates) if rates else None
    return profile
