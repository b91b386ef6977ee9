"""Stable seed derivation shared by corruption, scorers, and the harness."""

from __future__ import annotations

import hashlib


def derive_seed(base_seed: int, key: str) -> int:
    """Map (base seed, string key) to a 64-bit seed, stable across runs."""
    digest = hashlib.sha256(f"{base_seed}:{key}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
