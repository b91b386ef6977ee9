"""Aggregate scores built from other scores, on the x100 reporting scale."""

from __future__ import annotations

from ..errors import GenforgeError


def harmonic_mean(a: float, b: float) -> float:
    """2ab / (a + b); both inputs must be strictly positive."""
    if a <= 0 or b <= 0:
        raise GenforgeError(f"harmonic mean needs positive inputs, got {a}, {b}")
    return 2.0 * a * b / (a + b)


def combined_score(inform: float, success: float, bleu: float) -> float:
    """(inform + success) / 2 + bleu, all arguments expressed x100.

    The formula is the convention used by task-oriented dialogue leaderboards;
    it is kept explicit here so alternative combiners stay easy to add.
    """
    if inform < 0 or success < 0 or bleu < 0:
        raise GenforgeError("combined score inputs must be nonnegative")
    return (inform + success) / 2.0 + bleu
