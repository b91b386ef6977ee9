"""Greedy, beam, and sampling decoders with repeated-n-gram blocking.

All strategies share the same blocking rule and the same tie-break (lowest
vocabulary index), so any two runs on the same scorer are reproducible.
Scores are length-normalized as logprob / steps^alpha, where steps counts
every emitted token including the terminal EOS.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .._validation import check_choice
from ..errors import GenforgeError, SearchSizeError, ValidationError
from .scorers import NEG_INF, Scorer

EXHAUSTIVE_GUARD = 1_000_000

STRATEGIES = ("greedy", "beam", "topk", "topp")
_STRATEGY_ALIASES = {"top-k": "topk", "top-p": "topp"}


@dataclass(frozen=True)
class DecodeParams:
    """Knobs shared by every decoding strategy."""

    beam_size: int = 5
    max_len: int = 32
    no_repeat_ngram: int = 3
    length_penalty: float = 1.0
    strategy: str = "beam"
    k: int = 10
    p: float = 1.0
    temperature: float = 1.0
    seed: int = 0
    block_source: bool = False

    def __post_init__(self):
        object.__setattr__(self, "strategy",
                           _STRATEGY_ALIASES.get(self.strategy, self.strategy))
        check_choice(self.strategy, "strategy", STRATEGIES)
        if self.beam_size < 1:
            raise ValidationError(f"beam_size must be >= 1, got {self.beam_size}")
        if self.max_len < 1:
            raise ValidationError(f"max_len must be >= 1, got {self.max_len}")
        if self.no_repeat_ngram < 0:
            raise ValidationError("no_repeat_ngram must be >= 0 (0 disables)")
        if self.length_penalty < 0:
            raise ValidationError("length_penalty must be >= 0")
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.p <= 1.0:
            raise ValidationError(f"p must lie in (0, 1], got {self.p}")
        if self.temperature <= 0:
            raise ValidationError("temperature must be > 0")


@dataclass(frozen=True)
class Hypothesis:
    """A decoded sequence; ``tokens`` excludes BOS/EOS markers."""

    tokens: tuple[str, ...]
    logprob: float
    score: float
    finished: bool
    ended_by_eos: bool

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def _normalized(logprob: float, steps: int, alpha: float) -> float:
    return logprob / (steps ** alpha)


def ngram_blocklist(prefix: Sequence[str], n: int) -> set[str]:
    """Tokens whose emission would repeat an n-gram already in ``prefix``."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if len(prefix) < n - 1:
        return set()
    context = tuple(prefix[len(prefix) - (n - 1):]) if n > 1 else ()
    blocked = set()
    for i in range(len(prefix) - n + 1):
        if tuple(prefix[i:i + n - 1]) == context:
            blocked.add(prefix[i + n - 1])
    return blocked


def _blocked(prefix: Sequence[str], source_tokens: Sequence[str],
             params: DecodeParams) -> set[str]:
    if params.no_repeat_ngram == 0:
        return set()
    window = list(source_tokens) + list(prefix) if params.block_source \
        else prefix
    return ngram_blocklist(window, params.no_repeat_ngram)


def _source_tokens(source: str) -> list[str]:
    return source.split()


def greedy(scorer: Scorer, source: str, params: DecodeParams) -> Hypothesis:
    """Pick the argmax token each step; ties go to the lowest vocab index.

    If blocking forbids every candidate, the step emits EOS (at its model
    probability) and the hypothesis ends.
    """
    vocab = list(scorer.vocabulary)
    eos = scorer.eos_token
    eos_idx = vocab.index(eos)
    src = _source_tokens(source)
    state = scorer.begin(source)
    tokens: list[str] = []
    cum = 0.0
    for step in range(params.max_len):
        dist = scorer.log_dist(state)
        blocked = _blocked(tokens, src, params)
        best = None
        for i, tok in enumerate(vocab):
            if tok != eos and (tok in blocked or dist[i] == NEG_INF):
                continue
            if best is None or dist[i] > dist[best]:
                best = i
        if best is None:
            best = eos_idx
        cum += dist[best]
        if best == eos_idx:
            return Hypothesis(tuple(tokens), cum,
                              _normalized(cum, step + 1, params.length_penalty),
                              finished=True, ended_by_eos=True)
        tokens.append(vocab[best])
        state = scorer.extend(state, vocab[best])
    return Hypothesis(tuple(tokens), cum,
                      _normalized(cum, params.max_len, params.length_penalty),
                      finished=True, ended_by_eos=False)


class _Beam:
    __slots__ = ("tokens", "indices", "cum", "state")

    def __init__(self, tokens, indices, cum, state):
        self.tokens = tokens
        self.indices = indices
        self.cum = cum
        self.state = state


def _finish(indices: tuple[int, ...], tokens: tuple[str, ...], cum: float,
            alpha: float, ended_by_eos: bool) -> tuple:
    score = _normalized(cum, len(indices), alpha)
    hyp = Hypothesis(tokens, cum, score, finished=True,
                     ended_by_eos=ended_by_eos)
    return (-score, indices), hyp


def beam_search(scorer: Scorer, source: str,
                params: DecodeParams) -> list[Hypothesis]:
    """Beam search returning up to ``beam_size`` hypotheses, best first.

    Each step ranks all extensions of the live beams by cumulative
    log-probability (ties by token-index sequence) and keeps the top
    ``beam_size``; extensions that emit EOS retire to a completed pool.
    Live beams still open at ``max_len`` join the pool flagged as not
    EOS-ended.  The pool is ranked by normalized score.  Search stops early
    only when no live beam's upper bound can still beat the pool's
    ``beam_size``-th best score.
    """
    vocab = list(scorer.vocabulary)
    eos = scorer.eos_token
    src = _source_tokens(source)
    alpha = params.length_penalty
    eos_idx = vocab.index(eos)
    live = [_Beam((), (), 0.0, scorer.begin(source))]
    pool: list[tuple] = []  # (sort_key, Hypothesis)
    for step in range(params.max_len):
        candidates = []
        for beam in live:
            dist = scorer.log_dist(beam.state)
            blocked = _blocked(beam.tokens, src, params)
            expandable = False
            for i, tok in enumerate(vocab):
                if dist[i] == NEG_INF:
                    continue
                if tok != eos and tok in blocked:
                    continue
                expandable = True
                candidates.append((-(beam.cum + dist[i]),
                                   beam.indices + (i,), tok, beam))
            if not expandable:  # same fallback as greedy: force EOS
                pool.append(_finish(beam.indices + (eos_idx,), beam.tokens,
                                    beam.cum + dist[eos_idx], alpha, True))
        candidates.sort(key=lambda c: (c[0], c[1]))
        next_live = []
        for neg_cum, indices, tok, parent in candidates[:params.beam_size]:
            cum = -neg_cum
            if tok == eos:
                pool.append(_finish(indices, parent.tokens, cum, alpha, True))
            else:
                next_live.append(_Beam(parent.tokens + (tok,), indices, cum,
                                       scorer.extend(parent.state, tok)))
        live = next_live
        if not live:
            break
        if len(pool) >= params.beam_size:
            kth_best = sorted(pool, key=lambda e: e[0])[params.beam_size - 1]
            bound = max(_normalized(b.cum, params.max_len, alpha) for b in live)
            if bound < -kth_best[0][0]:
                live = []
                break
    for beam in live:  # open beams that hit the length limit
        pool.append(_finish(beam.indices, beam.tokens, beam.cum, alpha, False))
    pool.sort(key=lambda e: e[0])
    return [hyp for _, hyp in pool[:params.beam_size]]


def sample(scorer: Scorer, source: str, params: DecodeParams) -> Hypothesis:
    """Temperature-scaled top-k / nucleus sampling with a seeded RNG."""
    if params.strategy not in ("topk", "topp"):
        raise ValidationError("sample() needs strategy 'topk' or 'topp'")
    vocab = list(scorer.vocabulary)
    eos = scorer.eos_token
    eos_idx = vocab.index(eos)
    src = _source_tokens(source)
    rng = random.Random(params.seed)
    state = scorer.begin(source)
    tokens: list[str] = []
    cum = 0.0
    for step in range(params.max_len):
        dist = scorer.log_dist(state)
        blocked = _blocked(tokens, src, params)
        scaled = []
        for i, tok in enumerate(vocab):
            if dist[i] == NEG_INF or (tok != eos and tok in blocked):
                continue
            scaled.append((i, dist[i] / params.temperature))
        if not scaled:
            cum += dist[eos_idx]
            return Hypothesis(tuple(tokens), cum,
                              _normalized(cum, step + 1, params.length_penalty),
                              finished=True, ended_by_eos=True)
        top = max(logit for _, logit in scaled)
        probs = [(i, math.exp(logit - top)) for i, logit in scaled]
        total = sum(p for _, p in probs)
        probs = [(i, p / total) for i, p in probs]
        probs.sort(key=lambda ip: (-ip[1], ip[0]))
        if params.strategy == "topk":
            kept = probs[:params.k]
        else:
            kept = []
            mass = 0.0
            for i, p in probs:
                kept.append((i, p))
                mass += p
                if mass >= params.p - 1e-12:
                    break
        total = sum(p for _, p in kept)
        draw = rng.random() * total
        running = 0.0
        choice = kept[-1][0]
        for i, p in kept:
            running += p
            if draw < running:
                choice = i
                break
        cum += dist[choice]
        if choice == eos_idx:
            return Hypothesis(tuple(tokens), cum,
                              _normalized(cum, step + 1, params.length_penalty),
                              finished=True, ended_by_eos=True)
        tokens.append(vocab[choice])
        state = scorer.extend(state, vocab[choice])
    return Hypothesis(tuple(tokens), cum,
                      _normalized(cum, params.max_len, params.length_penalty),
                      finished=True, ended_by_eos=False)


def exhaustive_argmax(scorer: Scorer, source: str, max_len: int,
                      length_penalty: float = 1.0) -> Hypothesis:
    """Enumerate every sequence up to ``max_len``; return the score maximizer.

    A guard refuses vocab^max_len beyond one million sequences.  No n-gram
    blocking is applied — this is the unconstrained search optimum.
    """
    if max_len < 1:
        raise ValidationError(f"max_len must be >= 1, got {max_len}")
    vocab = list(scorer.vocabulary)
    if len(vocab) ** max_len > EXHAUSTIVE_GUARD:
        raise SearchSizeError(
            f"search space {len(vocab)}^{max_len} exceeds {EXHAUSTIVE_GUARD}"
        )
    eos = scorer.eos_token
    best: list = [None, None]  # [sort_key, Hypothesis]

    def consider(indices, tokens, cum, ended_by_eos):
        key, hyp = _finish(indices, tokens, cum, length_penalty, ended_by_eos)
        if best[0] is None or key < best[0]:
            best[0], best[1] = key, hyp

    def walk(state, indices, tokens, cum):
        dist = scorer.log_dist(state)
        for i, tok in enumerate(vocab):
            if dist[i] == NEG_INF:
                continue
            cum2 = cum + dist[i]
            if tok == eos:
                consider(indices + (i,), tokens, cum2, True)
            elif len(indices) + 1 == max_len:
                consider(indices + (i,), tokens + (tok,), cum2, False)
            else:
                walk(scorer.extend(state, tok), indices + (i,),
                     tokens + (tok,), cum2)

    walk(scorer.begin(source), (), (), 0.0)
    if best[1] is None:
        raise GenforgeError("scorer admits no finite-probability sequence")
    return best[1]


def decode(scorer: Scorer, source: str, params: DecodeParams) -> Hypothesis:
    """Run the strategy named in ``params`` and return its best hypothesis."""
    if params.strategy == "greedy":
        return greedy(scorer, source, params)
    if params.strategy == "beam":
        return beam_search(scorer, source, params)[0]
    return sample(scorer, source, params)


def decode_corpus(scorer: Scorer, sources: Sequence[str],
                  params: DecodeParams) -> list[Hypothesis]:
    """Decode each source independently; output order matches input order."""
    return [decode(scorer, source, params) for source in sources]
