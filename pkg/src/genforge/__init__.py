"""genforge: corpus-scale text-generation evaluation, corruption, and decoding."""

from . import analysis, corpus, decode, harness, metrics, objectives
from .errors import GenforgeError

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "corpus",
    "decode",
    "harness",
    "metrics",
    "objectives",
    "GenforgeError",
    "__version__",
]
