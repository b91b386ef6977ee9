"""Small input-validation helpers used at public entry points."""

from __future__ import annotations

from typing import Sequence

from .errors import GenforgeError, ValidationError


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise GenforgeError(f"{name} must be an integer >= 1, got {value!r}")
    return value


def check_fraction(value, name: str, *, closed_right: bool = False) -> float:
    hi_ok = value <= 1.0 if closed_right else value < 1.0
    if not (0.0 < value and hi_ok):
        bound = "(0, 1]" if closed_right else "(0, 1)"
        raise GenforgeError(f"{name} must lie in {bound}, got {value!r}")
    return float(value)


def check_token_seq(tokens, name: str = "tokens") -> list[str]:
    if isinstance(tokens, str):
        raise GenforgeError(f"{name} must be a sequence of tokens, not a raw string")
    out = list(tokens)
    for t in out:
        if not isinstance(t, str):
            raise GenforgeError(f"{name} must contain only strings, got {type(t).__name__}")
    return out


def check_nonempty(seq: Sequence, name: str):
    if len(seq) == 0:
        raise GenforgeError(f"{name} must not be empty")
    return seq


def check_choice(value, name: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise GenforgeError(
            f"{name} must be one of {sorted(choices)}, got {value!r}"
        )
    return value


def check_unique_ids(ids: Sequence[str], where: str) -> None:
    seen: set[str] = set()
    dupes: list[str] = []
    for i in ids:
        if i in seen and i not in dupes:
            dupes.append(i)
        seen.add(i)
    if dupes:
        raise ValidationError(f"duplicate ids in {where}: {', '.join(dupes)}")
