"""The add-k n-gram language model behind the decode CLI."""

import math

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from genforge.corpus import Tokenizer
from genforge.decode import (
    BOS,
    EOS,
    DecodeParams,
    NGramLanguageModel,
    ngram_lm_fit,
    score_prefix,
)
from genforge.errors import EmptyDatasetError, GenforgeError

from conftest import make_example, toy_dataset

PAIRS = [("", "a b")] * 100  # spec-free corpus: 100 copies of target "a b"


def fit(pairs=PAIRS, **kw):
    return NGramLanguageModel(**kw).fit(pairs)


def test_vocabulary_layout():
    lm = fit([("x y", "a b")])
    assert lm.vocabulary_[:2] == [BOS, EOS]
    assert lm.vocabulary_ == [BOS, EOS, "a", "b", "x", "y"]
    assert lm.eos_token == EOS


def test_add_k_conditional_hand_count():
    # "a b" x100, order 2, add_k=1: after 'a', count(b)=100, total=100,
    # emittable vocab = {eos, a, b} -> P(b|a) = 101/103, P(a|a) = 1/103
    lm = fit(add_k=1.0, copy_weight=0.0)
    state = lm.extend(lm.begin(""), "a")
    dist = lm.log_dist(state)
    assert math.exp(dist[lm.index_["b"]]) == pytest.approx(101 / 103)
    assert math.exp(dist[lm.index_["a"]]) == pytest.approx(1 / 103)
    assert math.exp(dist[lm.index_["b"]]) > math.exp(dist[lm.index_["a"]])


def test_all_probabilities_positive():
    lm = fit(add_k=0.5, copy_weight=0.0)
    state = lm.begin("")
    for dist in (lm.log_dist(state), lm.log_dist(lm.extend(state, "b"))):
        # every emittable token gets smoothed mass; BOS never does
        assert dist[0] == float("-inf")
        assert all(x > float("-inf") for x in dist[1:])


def test_log_dist_normalizes_over_random_states():
    data = [("s t", "a b c"), ("u", "b c d a"), ("t u", "d")]
    lm = fit(data, order=3, add_k=0.7, copy_weight=0.4)
    state = lm.begin("s t unseen")
    for tok in ["a", "c", "d", "b", "a", "a"]:
        total = sum(math.exp(x) for x in lm.log_dist(state))
        assert total == pytest.approx(1.0, abs=1e-9)
        state = lm.extend(state, tok)


def test_copy_mixture_boosts_source_tokens():
    data = [("", "a b"), ("", "b c")]
    plain = fit(data, copy_weight=0.0)
    mixed = fit(data, copy_weight=0.5)
    i = mixed.index_["c"]
    p_plain = math.exp(plain.log_dist(plain.begin("c c"))[i])
    p_mixed = math.exp(mixed.log_dist(mixed.begin("c c"))[i])
    # copy dist is all 'c', so half the mass lands on it
    assert p_mixed == pytest.approx(0.5 * p_plain + 0.5)
    assert p_mixed > p_plain


def test_copy_weight_ignored_without_in_vocab_source():
    lm = fit([("", "a b")], copy_weight=0.9)
    empty_src = lm.log_dist(lm.begin(""))
    unknown_src = lm.log_dist(lm.begin("zzz qqq"))
    assert empty_src == unknown_src
    assert sum(math.exp(x) for x in unknown_src) == pytest.approx(1.0)


def test_unseen_source_tokens_dropped_from_copy_dist():
    lm = fit([("cat", "a")], copy_weight=0.5)
    # 'zebra' never seen: copy dist renormalizes over {cat}
    dist = lm.log_dist(lm.begin("zebra cat"))
    assert sum(math.exp(x) for x in dist) == pytest.approx(1.0, abs=1e-9)
    assert math.exp(dist[lm.index_["cat"]]) > 0.5 - 1e-9


def test_incremental_equals_from_scratch():
    data = [("s", "a b c a"), ("s", "b a")]
    lm = fit(data, order=3)
    prefix = ["a", "b", "c", "a", "b"]
    # score via k extends
    state = lm.begin("s")
    total = 0.0
    for tok in prefix:
        total += lm.log_dist(state)[lm.index_[tok]]
        state = lm.extend(state, tok)
    assert total == pytest.approx(score_prefix(lm, "s", prefix), abs=1e-12)


def test_old_states_stay_valid():
    lm = fit()
    s0 = lm.begin("")
    before = list(lm.log_dist(s0))
    lm.extend(s0, "a")
    assert list(lm.log_dist(s0)) == before


def test_order_one_ignores_context():
    lm = fit(order=1)
    s = lm.begin("")
    assert lm.extend(s, "a") == s
    assert lm.log_dist(lm.extend(s, "a")) == lm.log_dist(s)


def test_fit_on_dataset_uses_train_split():
    ds = toy_dataset(
        train=[make_example(0, "src", ["a b"]), make_example(1, "src", ["a b"])],
        test=[make_example(2, "src", ["z z"])],
    )
    lm = NGramLanguageModel().fit(ds)
    assert "z" not in lm.index_
    assert "a" in lm.index_


def test_fit_on_examples_uses_every_reference():
    rows = [make_example(0, "s", ["a b", "c d"])]
    lm = NGramLanguageModel().fit(rows)
    assert {"a", "b", "c", "d"} <= set(lm.index_)


def test_empty_fit_rejected():
    with pytest.raises(EmptyDatasetError):
        NGramLanguageModel().fit([])


def test_param_validation_at_fit_time():
    with pytest.raises(GenforgeError):
        NGramLanguageModel(order=0).fit(PAIRS)
    with pytest.raises(GenforgeError):
        NGramLanguageModel(add_k=0.0).fit(PAIRS)
    with pytest.raises(GenforgeError):
        NGramLanguageModel(copy_weight=1.5).fit(PAIRS)


def test_unfitted_access_raises():
    with pytest.raises(NotFittedError):
        NGramLanguageModel().vocabulary
    with pytest.raises(NotFittedError):
        NGramLanguageModel().predict(["x"])


def test_predict_reproduces_training_targets():
    data = [("the cat", "the cat sat")] * 5 + [("a dog", "a dog ran")] * 5
    lm = ngram_lm_fit(data, order=2, add_k=0.1)
    outs = lm.predict(["the cat", "a dog"],
                      DecodeParams(strategy="beam", beam_size=4, max_len=8))
    assert outs == ["the cat sat", "a dog ran"]


def test_sklearn_clone_and_params():
    lm = NGramLanguageModel(order=3, add_k=0.2, copy_weight=0.1,
                            tokenizer=Tokenizer(mode="whitespace"))
    params = lm.get_params(deep=False)
    assert params["order"] == 3
    cloned = clone(lm)
    assert cloned.get_params(deep=False)["add_k"] == 0.2
    # clone is unfitted even when the source was fitted
    lm.fit(PAIRS)
    assert not hasattr(clone(lm), "vocabulary_")


def test_custom_tokenizer_respected():
    lm = NGramLanguageModel(tokenizer=Tokenizer(mode="char")).fit([("", "ab")])
    assert "a" in lm.index_ and "b" in lm.index_ and "ab" not in lm.index_
