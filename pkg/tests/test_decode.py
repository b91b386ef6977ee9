"""Decoding strategies: greedy, beam, sampling, blocking, and the oracle."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genforge.decode import (
    DecodeParams,
    Hypothesis,
    RandomTableScorer,
    Scorer,
    TableScorer,
    beam_search,
    decode,
    decode_corpus,
    exhaustive_argmax,
    greedy,
    ngram_blocklist,
    sample,
    score_prefix,
)
from genforge.errors import (
    GenforgeError,
    SearchSizeError,
    ValidationError,
)

import oracles

EOS = "<eos>"


def table(vocab, rows):
    return TableScorer(vocab, rows)


POINT_MASS = table(["a", EOS], {(): [1.0, 0.0], ("a",): [0.0, 1.0]})


# -- params and hypothesis --------------------------------------------------


def test_params_defaults():
    p = DecodeParams()
    assert (p.beam_size, p.max_len, p.no_repeat_ngram) == (5, 32, 3)
    assert p.strategy == "beam"


@pytest.mark.parametrize("alias,canonical", [("top-k", "topk"),
                                             ("top-p", "topp")])
def test_params_strategy_aliases(alias, canonical):
    assert DecodeParams(strategy=alias).strategy == canonical


@pytest.mark.parametrize("kw", [
    {"beam_size": 0},
    {"max_len": 0},
    {"no_repeat_ngram": -1},
    {"length_penalty": -0.5},
    {"k": 0},
    {"p": 0.0},
    {"p": 1.5},
    {"temperature": 0.0},
    {"strategy": "dijkstra"},
])
def test_params_validation(kw):
    with pytest.raises(GenforgeError):
        DecodeParams(**kw)


def test_hypothesis_text():
    h = Hypothesis(tokens=("a", "b"), logprob=-1.0, score=-0.5,
                   finished=True, ended_by_eos=True)
    assert h.text == "a b"


# -- blocklist --------------------------------------------------------------


def test_blocklist_hand_examples():
    assert ngram_blocklist(["a", "b", "a", "b"], 3) == {"a"}
    assert ngram_blocklist(["a"], 3) == set()
    assert ngram_blocklist(["a", "b"], 1) == {"a", "b"}


def test_blocklist_bigram():
    # context is the last token; (b, x) must not recreate (b, a)
    assert ngram_blocklist(["a", "b", "c", "b"], 2) == {"c"}


def test_blocklist_rejects_bad_n():
    with pytest.raises(ValidationError):
        ngram_blocklist(["a"], 0)


@given(st.lists(st.sampled_from("ab"), max_size=10),
       st.integers(min_value=1, max_value=4))
def test_blocklist_soundness(prefix, n):
    # emitting any unblocked token never creates a duplicate n-gram ...
    blocked = ngram_blocklist(prefix, n)
    for tok in "ab":
        extended = prefix + [tok]
        if tok not in blocked:
            new = tuple(extended[-n:])
            if len(extended) >= n:
                count = sum(
                    1 for i in range(len(extended) - n + 1)
                    if tuple(extended[i:i + n]) == new)
                assert count == 1
        else:
            # ... and every blocked token would have created one
            assert oracles.has_repeated_ngram(extended, n)


# -- greedy -----------------------------------------------------------------


def test_greedy_point_mass():
    h = greedy(POINT_MASS, "", DecodeParams(strategy="greedy", max_len=5))
    assert h.tokens == ("a",)
    assert h.logprob == 0.0
    assert h.ended_by_eos


def test_greedy_tie_breaks_to_lowest_index():
    sc = table(["a", "b", EOS],
               {(): [0.45, 0.45, 0.1], ("a",): [0.0, 0.0, 1.0]})
    h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=4,
                                    no_repeat_ngram=0))
    assert h.tokens[0] == "a"


def test_greedy_forced_eos_when_all_blocked():
    # after emitting 'a', the unigram blocker forbids 'a' again and the row
    # gives zero mass to everything else except EOS
    sc = table(["a", EOS], {(): [0.9, 0.1], ("a",): [0.9, 0.1]})
    h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=8,
                                    no_repeat_ngram=1))
    assert h.tokens == ("a",)
    assert h.ended_by_eos
    assert h.logprob == pytest.approx(math.log(0.9) + math.log(0.1))


def test_greedy_runs_to_max_len():
    sc = table(["a", EOS], {})  # uniform everywhere
    h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=3,
                                    no_repeat_ngram=0))
    assert h.tokens == ("a", "a", "a")
    assert h.finished and not h.ended_by_eos
    assert h.score == pytest.approx(3 * math.log(0.5) / 3)


def test_greedy_score_counts_eos_step():
    h = greedy(POINT_MASS, "", DecodeParams(strategy="greedy", max_len=5,
                                            length_penalty=1.0))
    # one 'a' step at logprob 0 plus EOS at logprob 0: 2 steps
    assert h.score == pytest.approx(0.0)
    sc = table(["a", EOS], {(): [0.5, 0.5], ("a",): [0.5, 0.5]})
    h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=1))
    assert h.tokens == ("a",)
    assert h.score == pytest.approx(math.log(0.5) / 1)  # no EOS emitted


# -- beam -------------------------------------------------------------------


def test_beam_size_one_equals_greedy_on_random_tables():
    for seed in range(100):
        sc = RandomTableScorer(num_regular=3, seed=seed)
        params = DecodeParams(beam_size=1, max_len=6, no_repeat_ngram=3)
        g = greedy(sc, "", params)
        b = beam_search(sc, "", params)[0]
        assert g.tokens == b.tokens
        assert g.score == pytest.approx(b.score, abs=1e-12)


def test_beam_matches_exhaustive_oracle():
    for seed in range(50):
        sc = RandomTableScorer(num_regular=3, seed=1000 + seed)
        best = beam_search(sc, "", DecodeParams(beam_size=4 ** 4, max_len=4,
                                                no_repeat_ngram=0))[0]
        want = exhaustive_argmax(sc, "", 4)
        assert best.tokens == want.tokens
        assert best.score == pytest.approx(want.score, abs=1e-9)


def test_exhaustive_matches_independent_enumeration():
    for seed in range(25):
        sc = RandomTableScorer(num_regular=3, seed=2000 + seed)
        got = exhaustive_argmax(sc, "", 4)
        tokens, score = oracles.best_decode(sc, "", 4)
        assert got.tokens == tokens
        assert got.score == pytest.approx(score, abs=1e-9)


def test_beam_returns_ranked_pool():
    sc = RandomTableScorer(num_regular=3, seed=17)
    hyps = beam_search(sc, "", DecodeParams(beam_size=5, max_len=5))
    assert 1 <= len(hyps) <= 5
    scores = [h.score for h in hyps]
    assert scores == sorted(scores, reverse=True)
    assert all(h.finished for h in hyps)


def test_beam_unfinished_at_max_len_flagged():
    # EOS carries zero mass: nothing can finish before the length limit
    sc = table(["a", "b", EOS], {(): [0.5, 0.5, 0.0],
                                 ("a",): [0.6, 0.4, 0.0],
                                 ("b",): [0.6, 0.4, 0.0]})
    hyps = beam_search(sc, "", DecodeParams(beam_size=2, max_len=2,
                                            no_repeat_ngram=0))
    assert hyps
    assert all(not h.ended_by_eos for h in hyps)
    assert all(len(h.tokens) == 2 for h in hyps)


def test_beam_dead_end_gets_forced_eos():
    # after 'a' the unigram blocker forbids everything but EOS, which has
    # zero probability: the beam must still retire the hypothesis
    sc = table(["a", EOS], {(): [1.0, 0.0], ("a",): [1.0, 0.0]})
    hyps = beam_search(sc, "", DecodeParams(beam_size=1, max_len=5,
                                            no_repeat_ngram=1))
    g = greedy(sc, "", DecodeParams(strategy="greedy", max_len=5,
                                    no_repeat_ngram=1))
    assert hyps[0].tokens == g.tokens == ("a",)
    assert hyps[0].logprob == g.logprob == float("-inf")


def test_beam_no_repeat_outputs_clean():
    for seed in range(30):
        sc = RandomTableScorer(num_regular=2, seed=seed)
        h = beam_search(sc, "", DecodeParams(beam_size=4, max_len=24,
                                             no_repeat_ngram=3))[0]
        assert not oracles.has_repeated_ngram(h.tokens, 3)


def test_blocking_off_produces_repeats_somewhere():
    found = False
    for seed in range(30):
        sc = RandomTableScorer(num_regular=2, seed=seed)
        h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=24,
                                        no_repeat_ngram=0))
        if oracles.has_repeated_ngram(h.tokens, 3):
            found = True
            break
    assert found


def test_block_source_extends_window():
    # source 'a b' + block_source: emitting 'b' right after 'a' is forbidden
    sc = table(["a", "b", EOS],
               {(): [0.998, 0.001, 0.001], ("a",): [0.001, 0.998, 0.001],
                ("a", "b"): [0.001, 0.001, 0.998]})
    free = greedy(sc, "a b", DecodeParams(strategy="greedy", max_len=4,
                                          no_repeat_ngram=2))
    blocked = greedy(sc, "a b", DecodeParams(strategy="greedy", max_len=4,
                                             no_repeat_ngram=2,
                                             block_source=True))
    assert free.tokens == ("a", "b")
    assert blocked.tokens != ("a", "b")


# -- sampling ---------------------------------------------------------------


def test_sample_requires_sampling_strategy():
    with pytest.raises(ValidationError):
        sample(POINT_MASS, "", DecodeParams(strategy="beam"))


def test_sample_deterministic_under_seed():
    sc = RandomTableScorer(num_regular=4, seed=3)
    p = DecodeParams(strategy="topp", p=0.9, max_len=10, seed=123)
    assert sample(sc, "", p) == sample(sc, "", p)


def test_sample_seeds_differ():
    sc = RandomTableScorer(num_regular=4, seed=3)
    outs = {sample(sc, "", DecodeParams(strategy="topp", p=0.9, max_len=10,
                                        seed=s)).tokens for s in range(20)}
    assert len(outs) > 1


def test_top1_equals_greedy():
    for seed in range(20):
        sc = RandomTableScorer(num_regular=3, seed=seed)
        s = sample(sc, "", DecodeParams(strategy="topk", k=1, max_len=8,
                                        seed=seed))
        g = greedy(sc, "", DecodeParams(strategy="greedy", max_len=8))
        assert s.tokens == g.tokens


def test_tiny_nucleus_equals_greedy():
    for seed in range(20):
        sc = RandomTableScorer(num_regular=3, seed=seed)
        s = sample(sc, "", DecodeParams(strategy="topp", p=1e-9, max_len=8,
                                        seed=seed))
        g = greedy(sc, "", DecodeParams(strategy="greedy", max_len=8))
        assert s.tokens == g.tokens


def test_full_distribution_frequencies_match():
    # p=1, T=1, one-step decodes: empirical first-token frequencies must sit
    # within 3 sigma of the scorer's row over 10^5 draws
    probs = {"w0": 0.5, "w1": 0.2, "w2": 0.2, EOS: 0.1}
    sc = table(list(probs), {(): list(probs.values())})
    n = 100_000
    counts = dict.fromkeys(probs, 0)
    params = [DecodeParams(strategy="topp", p=1.0, temperature=1.0,
                           max_len=1, seed=s) for s in range(n)]
    for prm in params:
        h = sample(sc, "", prm)
        counts[h.tokens[0] if h.tokens else EOS] += 1
    for tok, p in probs.items():
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(counts[tok] / n - p) < 3 * sigma, (tok, counts[tok])


def test_temperature_flattens():
    # low temperature concentrates samples on the argmax token
    probs = [0.6, 0.3, 0.1]
    sc = table(["w0", "w1", EOS], {(): probs})
    cold = sum(
        sample(sc, "", DecodeParams(strategy="topk", k=10, temperature=0.05,
                                    max_len=1, seed=s)).tokens == ("w0",)
        for s in range(300))
    hot = sum(
        sample(sc, "", DecodeParams(strategy="topk", k=10, temperature=5.0,
                                    max_len=1, seed=s)).tokens == ("w0",)
        for s in range(300))
    assert cold > 290
    assert hot < 290


def test_topk_truncates():
    # k=2 on a 4-way row: the two lowest-probability tokens never appear
    sc = table(["w0", "w1", "w2", EOS], {(): [0.4, 0.3, 0.2, 0.1]})
    seen = set()
    for s in range(400):
        h = sample(sc, "", DecodeParams(strategy="topk", k=2, max_len=1,
                                        seed=s))
        seen.add(h.tokens[0] if h.tokens else EOS)
    assert seen == {"w0", "w1"}


def test_topp_nucleus_cut():
    # rows sorted 0.5, 0.3, 0.15, 0.05: p=0.8 keeps exactly the first two
    sc = table(["w0", "w1", "w2", EOS], {(): [0.5, 0.3, 0.15, 0.05]})
    seen = set()
    for s in range(400):
        h = sample(sc, "", DecodeParams(strategy="topp", p=0.8, max_len=1,
                                        seed=s))
        seen.add(h.tokens[0] if h.tokens else EOS)
    assert seen == {"w0", "w1"}


# -- exhaustive oracle ------------------------------------------------------


def test_exhaustive_point_mass():
    h = exhaustive_argmax(POINT_MASS, "", 3)
    assert h.tokens == ("a",)


def test_exhaustive_guard():
    with pytest.raises(SearchSizeError):
        exhaustive_argmax(RandomTableScorer(num_regular=9, seed=0), "", 8)


def test_exhaustive_rejects_bad_max_len():
    with pytest.raises(ValidationError):
        exhaustive_argmax(POINT_MASS, "", 0)


# -- plumbing ---------------------------------------------------------------


def test_decode_dispatches_by_strategy():
    sc = RandomTableScorer(num_regular=2, seed=5)
    for strategy in ("greedy", "beam", "topk", "topp"):
        h = decode(sc, "", DecodeParams(strategy=strategy, max_len=6, seed=1))
        assert isinstance(h, Hypothesis)
        assert h.finished


def test_decode_corpus_preserves_order():
    sc = RandomTableScorer(num_regular=2, seed=5)
    sources = [f"s{i}" for i in range(6)]
    hyps = decode_corpus(sc, sources, DecodeParams(max_len=6))
    singles = [decode(sc, s, DecodeParams(max_len=6)) for s in sources]
    assert hyps == singles


def test_scorer_protocol_runtime_check():
    assert isinstance(POINT_MASS, Scorer)
    assert isinstance(RandomTableScorer(), Scorer)


def test_score_prefix_matches_cumulative():
    sc = RandomTableScorer(num_regular=3, seed=8)
    h = greedy(sc, "", DecodeParams(strategy="greedy", max_len=5))
    if h.ended_by_eos:
        assert score_prefix(sc, "", h.tokens + (EOS,)) == pytest.approx(
            h.logprob)
    else:
        assert score_prefix(sc, "", h.tokens) == pytest.approx(h.logprob)


# -- table scorers ----------------------------------------------------------


def test_table_scorer_validates_rows():
    with pytest.raises(ValidationError, match="entries"):
        table(["a", EOS], {(): [1.0]})
    with pytest.raises(ValidationError, match="probability"):
        table(["a", EOS], {(): [0.9, 0.3]})
    with pytest.raises(ValidationError, match="<eos>"):
        TableScorer(["a", "b"], {})


def test_table_scorer_uniform_fallback():
    sc = table(["a", "b", EOS], {})
    assert math.exp(sc.log_dist(sc.begin("")) [0]) == pytest.approx(1 / 3)


def test_random_table_rows_normalize():
    sc = RandomTableScorer(num_regular=5, seed=11)
    state = sc.begin("")
    for tok in ("w0", "w3", "w1"):
        assert sum(math.exp(x) for x in sc.log_dist(state)) == pytest.approx(
            1.0, abs=1e-9)
        state = sc.extend(state, tok)


def test_random_table_deterministic():
    a = RandomTableScorer(num_regular=3, seed=4)
    b = RandomTableScorer(num_regular=3, seed=4)
    state_a = a.extend(a.begin(""), "w1")
    state_b = b.extend(b.begin(""), "w1")
    assert list(a.log_dist(state_a)) == list(b.log_dist(state_b))


def test_extend_keeps_old_state_valid():
    sc = RandomTableScorer(num_regular=3, seed=4)
    s0 = sc.begin("")
    before = list(sc.log_dist(s0))
    sc.extend(s0, "w0")
    assert list(sc.log_dist(s0)) == before
