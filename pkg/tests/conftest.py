"""Shared fixtures and small random-data builders for the test suite."""

from __future__ import annotations

import json
import random

import pytest

from genforge.corpus import Dataset, Example

VOCAB4 = ("a", "b", "c", "d")


def make_example(i, source, references):
    return Example(id=f"r{i}", source=source, references=tuple(references))


def toy_dataset(name="toy", train=None, valid=None, test=None):
    splits = {}
    for split, rows in (("train", train), ("valid", valid), ("test", test)):
        if rows is not None:
            splits[split] = tuple(rows)
    return Dataset(name=name, splits=splits)


def random_micro_corpus(rng, max_records=5, max_tokens=6, vocab=VOCAB4,
                        min_records=1, min_hyp_tokens=0):
    """Token-level (hyp, refs) pairs matching the oracle-suite size bounds."""
    pairs = []
    for _ in range(rng.randint(min_records, max_records)):
        hyp = [rng.choice(vocab)
               for _ in range(rng.randint(min_hyp_tokens, max_tokens))]
        refs = [[rng.choice(vocab) for _ in range(rng.randint(1, max_tokens))]
                for _ in range(rng.randint(1, 2))]
        pairs.append((hyp, refs))
    return pairs


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
    return path


@pytest.fixture
def corpus_dir(tmp_path):
    """A three-split dataset directory named ``toy`` with aligned sources."""
    rng = random.Random(99)
    words = "the cat dog sat ran mat on far away big red".split()

    def sentence(k):
        return " ".join(rng.choice(words) for _ in range(k))

    for split, count in (("train", 24), ("valid", 6), ("test", 6)):
        rows = []
        for i in range(count):
            src = sentence(rng.randint(3, 8))
            rows.append({"id": f"{split}-{i}", "source": src,
                         "target": [src + " " + sentence(2), sentence(4)]})
        write_jsonl(tmp_path / f"toy.{split}.jsonl", rows)
    return tmp_path
