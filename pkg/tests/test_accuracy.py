"""Exact match, token F1, and the two aggregate score combiners."""

import random

import pytest

from genforge.errors import GenforgeError
from genforge.metrics import (
    combined_score,
    exact_match,
    harmonic_mean,
    squad_normalize,
    token_f1,
)

import oracles


def test_squad_normalization():
    assert squad_normalize("The Answer!") == "answer"
    assert squad_normalize("An apple, a day.") == "apple day"
    assert squad_normalize("  spaced   out  ") == "spaced out"


def test_exact_match_normalized():
    assert exact_match("The Answer!", ["the answer"]) == 1
    assert exact_match("an answer", ["the answers"]) == 0


def test_exact_match_raw_mode():
    assert exact_match("same text", ["same text"], normalizer="none") == 1
    assert exact_match("The", ["the"], normalizer="none") == 0


def test_exact_match_any_reference():
    assert exact_match("b", ["a", "b"]) == 1


def test_token_f1_hand_example():
    # raw mode: overlap {b, c} of 3-token bags either side
    assert token_f1("a b c", ["b c d"], normalizer="none") == pytest.approx(2 / 3)
    # squad mode additionally drops the article "a" from the hypothesis
    assert token_f1("a b c", ["b c d"]) == pytest.approx(0.8)


def test_token_f1_identity_and_disjoint():
    assert token_f1("x y", ["x y"]) == 1.0
    assert token_f1("x", ["y"]) == 0.0


def test_token_f1_empty_conventions():
    # both sides normalize to empty -> 1; one side empty -> 0
    assert token_f1("the", ["a an"]) == 1.0
    assert token_f1("the", ["word"]) == 0.0
    assert token_f1("word", ["the"]) == 0.0


def test_token_f1_best_reference():
    assert token_f1("a b", ["z z", "a b"]) == 1.0


def test_accuracy_matches_oracle_on_messy_strings():
    rng = random.Random(5005)
    alphabet = ["The", "a", "an", "cat!", "sat,", "mat.", "DOG", ""]
    for _ in range(300):
        hyp = " ".join(rng.choice(alphabet) for _ in range(rng.randint(0, 4)))
        refs = [" ".join(rng.choice(alphabet) for _ in range(rng.randint(0, 4)))
                for _ in range(rng.randint(1, 3))]
        assert float(exact_match(hyp, refs)) == oracles.exact_match(hyp, refs)
        assert token_f1(hyp, refs) == pytest.approx(
            oracles.token_f1(hyp, refs), abs=1e-12)


# -- combiners --------------------------------------------------------------


def test_harmonic_mean_values():
    assert harmonic_mean(76.50, 92.90) == pytest.approx(83.90, abs=0.01)
    assert harmonic_mean(5.0, 5.0) == 5.0
    assert harmonic_mean(1.0, 3.0) == pytest.approx(1.5)


def test_harmonic_mean_rejects_nonpositive():
    with pytest.raises(GenforgeError):
        harmonic_mean(0.0, 1.0)
    with pytest.raises(GenforgeError):
        harmonic_mean(1.0, -2.0)


def test_combined_score_values():
    assert combined_score(84.88, 74.91, 17.89) == pytest.approx(97.785)
    assert combined_score(0, 0, 0) == 0.0
    assert combined_score(100, 100, 0) == 100.0


def test_combined_score_rejects_negative():
    with pytest.raises(GenforgeError):
        combined_score(-1, 0, 0)
