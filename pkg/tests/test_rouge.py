"""ROUGE-N overlap scores and the LCS-based ROUGE-L."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genforge.metrics import lcs_length, rouge_l, rouge_n

import oracles

tokens = st.lists(st.sampled_from("abc"), max_size=8)


def test_rouge_1_hand_example():
    prf = rouge_n(["a", "b", "c"], [["b", "c", "d"]], 1)
    assert prf.precision == pytest.approx(2 / 3)
    assert prf.recall == pytest.approx(2 / 3)
    assert prf.f1 == pytest.approx(2 / 3)


def test_rouge_identity():
    assert rouge_n(["x", "y"], [["x", "y"]], 1).f1 == 1.0
    assert rouge_n(["x", "y"], [["x", "y"]], 2).f1 == 1.0
    assert rouge_l(["x", "y"], [["x", "y"]]).f1 == 1.0


def test_rouge_disjoint():
    assert rouge_n(["a"], [["b"]], 1).f1 == 0.0
    assert rouge_l(["a"], [["b"]]).f1 == 0.0


def test_rouge_n_multi_reference_takes_best_f1():
    weak = [["a", "x", "y"]]
    strong = [["a", "x", "y"], ["a", "b", "c"]]
    hyp = ["a", "b", "c"]
    assert rouge_n(hyp, strong, 1).f1 > rouge_n(hyp, weak, 1).f1
    assert rouge_n(hyp, strong, 1).f1 == 1.0


def test_rouge_n_clips_repeats():
    # hyp has 'a' twice, ref once: overlap must clip to 1
    prf = rouge_n(["a", "a"], [["a", "b"]], 1)
    assert prf.precision == pytest.approx(1 / 2)
    assert prf.recall == pytest.approx(1 / 2)


def test_rouge_l_hand_dp_example():
    prf = rouge_l(["the", "cat", "sat"], [["the", "cat", "on", "the", "mat"]])
    assert prf.precision == pytest.approx(2 / 3)
    assert prf.recall == pytest.approx(2 / 5)
    assert prf.f1 == pytest.approx(0.5)


def test_rouge_l_reversed():
    assert rouge_l(["c", "b", "a"], [["a", "b", "c"]]).f1 == pytest.approx(1 / 3)


def test_rouge_empty_sides():
    assert rouge_l([], [["a"]]).f1 == 0.0
    assert rouge_n([], [["a"]], 1).f1 == 0.0
    # ref shorter than n with no hyp n-grams is 0, not an error
    assert rouge_n(["a"], [["b"]], 2).f1 == 0.0


def test_lcs_hand_values():
    assert lcs_length(list("abcde"), list("ace")) == 3
    assert lcs_length(list("abc"), list("abc")) == 3
    assert lcs_length(list("abc"), list("xyz")) == 0
    assert lcs_length([], list("abc")) == 0


@given(tokens, tokens)
@settings(max_examples=150)
def test_lcs_equals_exhaustive_enumeration(a, b):
    assert lcs_length(a, b) == oracles.lcs_exhaustive(a, b)


@given(tokens, tokens)
@settings(max_examples=100)
def test_lcs_symmetry(a, b):
    assert lcs_length(a, b) == lcs_length(b, a)


def test_matches_oracle_on_random_pairs():
    rng = random.Random(2002)
    for _ in range(200):
        hyp = [rng.choice("abcd") for _ in range(rng.randint(0, 6))]
        refs = [[rng.choice("abcd") for _ in range(rng.randint(1, 6))]
                for _ in range(rng.randint(1, 3))]
        for n in (1, 2):
            assert rouge_n(hyp, refs, n).f1 == pytest.approx(
                oracles.rouge_n(hyp, refs, n), abs=1e-9)
        assert rouge_l(hyp, refs).f1 == pytest.approx(
            oracles.rouge_l(hyp, refs), abs=1e-9)
