"""Seeded corruption objectives that turn clean text into (input, target) pairs.

Four objectives are provided: next-token shift (``lm``), single-span masking
(``masked-seq2seq``), text infilling with optional sentence permutation
(``denoising``), and sentinel-delimited span prediction (``span-prediction``).
Every pair carries a JSON-serializable plan recording exactly which positions
were masked, and :func:`reconstruct` uses that plan to recover the original
sequence (verifying integrity along the way).
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from ._seeding import derive_seed
from ._validation import check_choice
from .corpus import TokenSeq
from .errors import IntegrityError, ValidationError

__all__ = [
    "MASK", "MAX_SENTINELS", "OBJECTIVES", "RESERVED_TOKENS",
    "CorruptionSpec", "CorruptionPair", "CorruptionTransformer",
    "check_no_reserved", "corrupt", "corrupt_lm", "corrupt_mass",
    "corrupt_denoise", "corrupt_span", "derive_seed", "reconstruct",
    "sentinel",
]

MASK = "<mask>"
MAX_SENTINELS = 100
OBJECTIVES = ("lm", "masked-seq2seq", "denoising", "span-prediction")

# Default masked fraction per objective; lm masks nothing.
DEFAULT_RATIOS = {"masked-seq2seq": 0.5, "denoising": 0.3, "span-prediction": 0.15}
DEFAULT_MEAN_SPAN = 3.0

RESERVED_TOKENS = frozenset({MASK} | {f"<s{i}>" for i in range(MAX_SENTINELS)})

_SENTENCE_END = (".", "!", "?")


def sentinel(i: int) -> str:
    return f"<s{i}>"


def _sentinel_index(token: str) -> int | None:
    if token.startswith("<s") and token.endswith(">"):
        digits = token[2:-1]
        if digits.isdigit() and not (len(digits) > 1 and digits[0] == "0"):
            idx = int(digits)
            if idx < MAX_SENTINELS:
                return idx
    return None


def check_no_reserved(tokens: Sequence[str]) -> None:
    """Reject sequences containing mask/sentinel literals."""
    for pos, tok in enumerate(tokens):
        if tok in RESERVED_TOKENS:
            raise ValidationError(
                f"reserved token {tok!r} at position {pos}; "
                "input text may not contain mask or sentinel literals"
            )


@dataclass(frozen=True)
class CorruptionSpec:
    """Parameters for one corruption objective.

    ``mask_ratio=None`` selects the objective's default (0.5 for
    masked-seq2seq, 0.3 for denoising, 0.15 for span prediction).
    """

    objective: str = "denoising"
    mask_ratio: float | None = None
    mean_span: float = DEFAULT_MEAN_SPAN
    permute_sentences: bool = False
    seed: int = 0

    def __post_init__(self):
        check_choice(self.objective, "objective", OBJECTIVES)
        if self.mask_ratio is not None and not 0.0 < self.mask_ratio < 1.0:
            raise ValidationError(
                f"mask_ratio must lie in (0, 1), got {self.mask_ratio}"
            )
        if self.mean_span < 1:
            raise ValidationError(f"mean_span must be >= 1, got {self.mean_span}")
        if not isinstance(self.seed, int):
            raise ValidationError("seed must be an integer")

    @property
    def ratio(self) -> float:
        if self.mask_ratio is not None:
            return self.mask_ratio
        return DEFAULT_RATIOS.get(self.objective, 0.0)


@dataclass(frozen=True)
class CorruptionPair:
    """A corrupted input, its reconstruction target, and the masking plan."""

    input: tuple[str, ...]
    target: tuple[str, ...]
    plan: dict = field(compare=True)

    def to_record(self) -> dict:
        return {"input": list(self.input), "target": list(self.target),
                "plan": self.plan}


def _as_tokens(tokens: Sequence[str] | str) -> list[str]:
    if isinstance(tokens, str):
        tokens = tokens.split()
    return list(tokens)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@lru_cache(maxsize=64)
def _poisson_cdf(lo: int, hi: int, mean: float) -> tuple[float, ...]:
    # Unnormalized cumulative weights of a Poisson(mean) truncated to [lo, hi];
    # the e^-mean factor cancels when sampling against the running total.
    cumulative = []
    total = 0.0
    for k in range(lo, hi + 1):
        total += mean ** k / math.factorial(k)
        cumulative.append(total)
    return tuple(cumulative)


def _draw_span_length(rng: random.Random, lo: int, hi: int, mean: float) -> int:
    cdf = _poisson_cdf(lo, hi, mean)
    u = rng.random() * cdf[-1]
    return lo + bisect.bisect_left(cdf, u)


def _place_spans(rng: random.Random, lengths: Sequence[int], n: int
                 ) -> list[list[int]]:
    """Choose left-to-right starts for ``lengths`` with >=1 token between spans.

    Uniform over valid placements: the free slack (tokens not covered by spans
    or mandatory separators) is split across the k+1 gaps by sampling a random
    composition.
    """
    k = len(lengths)
    budget = sum(lengths)
    slack = n - budget - (k - 1)
    if slack < 0:
        raise ValidationError("spans do not fit the sequence")
    if k == 0:
        return []
    cuts = sorted(rng.sample(range(slack + k), k))
    parts = [cuts[0]]
    parts += [cuts[i] - cuts[i - 1] - 1 for i in range(1, k)]
    spans = []
    pos = parts[0]
    for i, length in enumerate(lengths):
        spans.append([pos, length])
        pos += length + 1  # mandatory separator
        if i + 1 < k:
            pos += parts[i + 1]
    return spans


def _draw_lengths(rng: random.Random, budget: int, n: int, mean: float,
                  lo: int, max_spans: int) -> list[int]:
    """Draw span lengths summing exactly to ``budget``.

    Lengths follow a truncated Poisson on [lo, 10]; the final span shrinks to
    land on the budget, or grows to absorb it once ``max_spans`` or the
    placement-feasibility bound is reached.  With ``lo == 0``, zero-length
    spans are kept (they insert a mask without consuming budget).
    """
    lengths: list[int] = []
    remaining = budget
    while remaining > 0:
        k = len(lengths)
        # One more span needs k separators: budget + k <= n must keep holding.
        if k == max_spans or budget + k > n:
            if lengths:
                lengths[-1] += remaining
            else:
                lengths.append(remaining)
            break
        drawn = min(_draw_span_length(rng, lo, 10, mean), remaining)
        lengths.append(drawn)
        remaining -= drawn
    return lengths


def _split_sentences(tokens: Sequence[str]) -> list[list[str]]:
    """Token-level sentence split: a sentence ends at a token ending in .!?"""
    sentences: list[list[str]] = []
    current: list[str] = []
    for tok in tokens:
        current.append(tok)
        if tok.endswith(_SENTENCE_END):
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def _mask_spans(tokens: Sequence[str], spans: Sequence[Sequence[int]]
                ) -> list[str]:
    out: list[str] = []
    pos = 0
    for start, length in spans:
        out.extend(tokens[pos:start])
        out.append(MASK)
        pos = start + length
    out.extend(tokens[pos:])
    return out


def corrupt_lm(tokens: Sequence[str] | str) -> CorruptionPair:
    """Next-token prediction: input drops the last token, target the first."""
    toks = _as_tokens(tokens)
    check_no_reserved(toks)
    if len(toks) < 2:
        raise ValidationError("lm objective needs at least 2 tokens")
    return CorruptionPair(input=tuple(toks[:-1]), target=tuple(toks[1:]),
                          plan={"objective": "lm", "length": len(toks)})


def corrupt_mass(tokens: Sequence[str] | str,
                 spec: CorruptionSpec | None = None) -> CorruptionPair:
    """Mask one contiguous span; the target is the span itself."""
    spec = spec or CorruptionSpec(objective="masked-seq2seq")
    toks = _as_tokens(tokens)
    check_no_reserved(toks)
    n = len(toks)
    if n < 2:
        raise ValidationError("masked-seq2seq objective needs at least 2 tokens")
    rng = random.Random(spec.seed)
    ratio = spec.mask_ratio if spec.mask_ratio is not None else 0.5
    length = min(n, max(1, _round_half_up(ratio * n)))
    start = rng.randrange(n - length + 1)
    corrupted = toks[:start] + [MASK] * length + toks[start + length:]
    return CorruptionPair(
        input=tuple(corrupted),
        target=tuple(toks[start:start + length]),
        plan={"objective": "masked-seq2seq", "length": n,
              "spans": [[start, length]]},
    )


def corrupt_denoise(tokens: Sequence[str] | str,
                    spec: CorruptionSpec | None = None) -> CorruptionPair:
    """Text infilling: each sampled span collapses to a single mask token.

    With ``permute_sentences`` the (naively punctuation-split) sentences are
    shuffled before masking; the target is always the original order.
    """
    spec = spec or CorruptionSpec(objective="denoising")
    toks = _as_tokens(tokens)
    check_no_reserved(toks)
    if not toks:
        raise ValidationError("denoising objective needs a nonempty sequence")
    rng = random.Random(spec.seed)
    perm = None
    work = toks
    if spec.permute_sentences:
        sentences = _split_sentences(toks)
        perm = list(range(len(sentences)))
        rng.shuffle(perm)
        work = [tok for idx in perm for tok in sentences[idx]]
    n = len(work)
    ratio = spec.mask_ratio if spec.mask_ratio is not None else 0.3
    budget = max(1, _round_half_up(ratio * n))
    lengths = _draw_lengths(rng, budget, n, spec.mean_span, lo=0,
                            max_spans=n - budget + 1)
    spans = _place_spans(rng, lengths, n)
    return CorruptionPair(
        input=tuple(_mask_spans(work, spans)),
        target=tuple(toks),
        plan={"objective": "denoising", "length": n, "spans": spans,
              "sentence_perm": perm},
    )


def corrupt_span(tokens: Sequence[str] | str,
                 spec: CorruptionSpec | None = None) -> CorruptionPair:
    """Replace non-adjacent spans with sentinels; target lists the spans.

    The i-th span becomes ``<si>`` in the input; the target interleaves each
    sentinel with its span content and closes with a terminal sentinel.  At
    most 99 spans are used — if the budget needs more, the final span grows.
    """
    spec = spec or CorruptionSpec(objective="span-prediction")
    toks = _as_tokens(tokens)
    check_no_reserved(toks)
    n = len(toks)
    if n < 2:
        raise ValidationError("span-prediction objective needs at least 2 tokens")
    rng = random.Random(spec.seed)
    ratio = spec.mask_ratio if spec.mask_ratio is not None else 0.15
    budget = max(1, _round_half_up(ratio * n))
    lengths = _draw_lengths(rng, budget, n, spec.mean_span, lo=1,
                            max_spans=MAX_SENTINELS - 1)
    spans = _place_spans(rng, lengths, n)
    corrupted: list[str] = []
    target: list[str] = []
    pos = 0
    for i, (start, length) in enumerate(spans):
        corrupted.extend(toks[pos:start])
        corrupted.append(sentinel(i))
        target.append(sentinel(i))
        target.extend(toks[start:start + length])
        pos = start + length
    corrupted.extend(toks[pos:])
    target.append(sentinel(len(spans)))
    return CorruptionPair(
        input=tuple(corrupted), target=tuple(target),
        plan={"objective": "span-prediction", "length": n, "spans": spans},
    )


def corrupt(tokens: Sequence[str] | str, spec: CorruptionSpec) -> CorruptionPair:
    """Dispatch to the objective named by ``spec.objective``."""
    if spec.objective == "lm":
        return corrupt_lm(tokens)
    if spec.objective == "masked-seq2seq":
        return corrupt_mass(tokens, spec)
    if spec.objective == "denoising":
        return corrupt_denoise(tokens, spec)
    return corrupt_span(tokens, spec)


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise IntegrityError(message)


def _reconstruct_lm(pair: CorruptionPair) -> list[str]:
    _check(len(pair.input) == len(pair.target) >= 1, "lm pair length mismatch")
    overlap_ok = all(pair.input[k + 1] == pair.target[k]
                     for k in range(len(pair.target) - 1))
    _check(overlap_ok, "lm input/target are not one-token shifts of each other")
    return list(pair.input) + [pair.target[-1]]


def _reconstruct_mass(pair: CorruptionPair) -> list[str]:
    spans = pair.plan.get("spans")
    _check(isinstance(spans, list) and len(spans) == 1, "mass plan needs one span")
    start, length = spans[0]
    _check(len(pair.target) == length, "target length does not match plan")
    _check(tuple(pair.input[start:start + length]) == (MASK,) * length,
           "masked positions do not match plan")
    return list(pair.input[:start]) + list(pair.target) + \
        list(pair.input[start + length:])


def _checked_spans(plan: dict, n: int, min_len: int) -> list[list[int]]:
    spans = plan.get("spans")
    _check(isinstance(spans, list), "plan is missing spans")
    prev_end = -1
    for span in spans:
        _check(len(span) == 2, "malformed span entry")
        start, length = span
        _check(length >= min_len and 0 <= start and start + length <= n,
               "span out of range")
        _check(start > prev_end, "spans overlap or are out of order")
        prev_end = start + length
    return spans


def _reconstruct_denoise(pair: CorruptionPair) -> list[str]:
    n = pair.plan.get("length")
    _check(len(pair.target) == n, "target length does not match plan")
    work = list(pair.target)
    perm = pair.plan.get("sentence_perm")
    if perm is not None:
        sentences = _split_sentences(pair.target)
        _check(sorted(perm) == list(range(len(sentences))),
               "sentence permutation does not match target")
        work = [tok for idx in perm for tok in sentences[idx]]
    spans = _checked_spans(pair.plan, n, min_len=0)
    _check(tuple(_mask_spans(work, spans)) == tuple(pair.input),
           "input does not match target masked per plan")
    return list(pair.target)


def _parse_span_target(target: Sequence[str]) -> list[list[str]]:
    """Split a sentinel-interleaved target into per-span token lists."""
    _check(len(target) >= 1 and _sentinel_index(target[0]) == 0,
           "target must open with sentinel 0")
    segments: list[list[str]] = []
    expected = 1
    current: list[str] = []
    for tok in target[1:]:
        idx = _sentinel_index(tok)
        if idx is None:
            current.append(tok)
        else:
            _check(idx == expected, f"expected sentinel {expected}, saw {tok}")
            segments.append(current)
            current = []
            expected += 1
    _check(not current, "target does not end with a terminal sentinel")
    return segments


def _reconstruct_span(pair: CorruptionPair) -> list[str]:
    n = pair.plan.get("length")
    spans = _checked_spans(pair.plan, n, min_len=1)
    segments = _parse_span_target(pair.target)
    _check(len(segments) == len(spans), "span count differs between plan and target")
    out: list[str] = []
    pos = 0
    in_idx = 0
    for i, (start, length) in enumerate(spans):
        _check(len(segments[i]) == length, "span length differs from plan")
        gap = start - pos
        out.extend(pair.input[in_idx:in_idx + gap])
        _check(in_idx + gap < len(pair.input)
               and pair.input[in_idx + gap] == sentinel(i),
               f"input is missing sentinel {i} at its planned position")
        out.extend(segments[i])
        in_idx += gap + 1
        pos = start + length
    out.extend(pair.input[in_idx:])
    _check(len(out) == n, "reconstruction length does not match plan")
    return out


def reconstruct(pair: CorruptionPair) -> TokenSeq:
    """Invert a corruption pair using its plan; raise on inconsistency."""
    objective = pair.plan.get("objective")
    if objective == "lm":
        return _reconstruct_lm(pair)
    if objective == "masked-seq2seq":
        return _reconstruct_mass(pair)
    if objective == "denoising":
        return _reconstruct_denoise(pair)
    if objective == "span-prediction":
        return _reconstruct_span(pair)
    raise IntegrityError(f"plan names unknown objective {objective!r}")


class CorruptionTransformer(BaseEstimator, TransformerMixin):
    """Estimator wrapper applying one objective across a batch of sequences.

    Each row gets its own seed derived from ``seed`` and the row index, so a
    batch does not repeat the same mask pattern on every row.
    """

    def __init__(self, objective="denoising", mask_ratio=None,
                 mean_span=DEFAULT_MEAN_SPAN, permute_sentences=False, seed=0):
        self.objective = objective
        self.mask_ratio = mask_ratio
        self.mean_span = mean_span
        self.permute_sentences = permute_sentences
        self.seed = seed

    def _spec(self, seed: int) -> CorruptionSpec:
        return CorruptionSpec(objective=self.objective,
                              mask_ratio=self.mask_ratio,
                              mean_span=self.mean_span,
                              permute_sentences=self.permute_sentences,
                              seed=seed)

    def fit(self, X, y=None):
        self._spec(self.seed)  # validates parameters
        self.n_features_in_ = 1
        return self

    def transform(self, X) -> list[CorruptionPair]:
        self._spec(self.seed)
        return [self.corrupt_one(row, key=str(i)) for i, row in enumerate(X)]

    def corrupt_one(self, tokens: Sequence[str] | str, key: str
                    ) -> CorruptionPair:
        return corrupt(tokens, self._spec(derive_seed(self.seed, key)))
