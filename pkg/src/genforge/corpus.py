"""Unified text-to-text corpus model: datasets, tokenization, n-grams.

Every task is reduced to (source text, one or more target texts) records.
The canonical on-disk form is JSONL, one object per line:

    {"id": "7", "source": "...", "target": ["...", "..."]}

TSV (``source<TAB>target[<TAB>target...]``) is accepted for ingestion
convenience and gets line-number ids assigned.
"""

from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_positive_int, check_token_seq, check_unique_ids
from .errors import EmptyDatasetError, GenforgeError, ParseError, ValidationError

SPLIT_NAMES = ("train", "valid", "test")

TokenSeq = list[str]

_WORD_PUNCT_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


@dataclass(frozen=True)
class Example:
    """One source -> references pair in the unified text-to-text format."""

    id: str
    source: str
    references: tuple[str, ...]

    def __post_init__(self):
        if not self.id:
            raise ValidationError("example id must be nonempty")
        if not self.references:
            raise ValidationError(f"example {self.id!r} has no references")
        object.__setattr__(self, "references", tuple(self.references))
        for ref in self.references:
            if ref == "":
                raise ValidationError(f"example {self.id!r} has an empty reference")

    def to_record(self) -> dict:
        return {"id": self.id, "source": self.source, "target": list(self.references)}


@dataclass(frozen=True)
class Dataset:
    """Named collection of splits, each an ordered list of examples."""

    name: str
    splits: dict[str, tuple[Example, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.splits:
            raise ValidationError(f"dataset {self.name!r} has no splits")
        normalized = {}
        for split, examples in self.splits.items():
            if split not in SPLIT_NAMES:
                raise ValidationError(
                    f"unknown split {split!r}; expected one of {SPLIT_NAMES}"
                )
            examples = tuple(examples)
            check_unique_ids([e.id for e in examples], f"split {split!r}")
            normalized[split] = examples
        object.__setattr__(self, "splits", normalized)

    def __getitem__(self, split: str) -> tuple[Example, ...]:
        try:
            return self.splits[split]
        except KeyError:
            raise KeyError(
                f"dataset {self.name!r} has no split {split!r} "
                f"(available: {sorted(self.splits)})"
            ) from None

    @property
    def num_examples(self) -> int:
        return sum(len(v) for v in self.splits.values())


class Tokenizer(BaseEstimator, TransformerMixin):
    """Deterministic text tokenizer shared by all metric computations.

    Modes:
      ``whitespace``  split on runs of whitespace
      ``word``        Unicode word characters and individual punctuation marks
      ``char``        one token per non-whitespace Unicode scalar

    ``char`` mode ignores ``strip_punctuation``. Same text and settings always
    produce the same token list, so results are cacheable by text identity.
    """

    MODES = ("whitespace", "word", "char")

    def __init__(self, mode: str = "word", lowercase: bool = True,
                 strip_punctuation: bool = False):
        self.mode = mode
        self.lowercase = lowercase
        self.strip_punctuation = strip_punctuation

    def _check(self):
        if self.mode not in self.MODES:
            raise GenforgeError(
                f"tokenizer mode must be one of {self.MODES}, got {self.mode!r}"
            )

    def tokenize(self, text: str) -> TokenSeq:
        self._check()
        if self.lowercase:
            text = text.lower()
        if self.mode == "whitespace":
            return text.split()
        if self.mode == "char":
            return [ch for ch in text if not ch.isspace()]
        tokens = _WORD_PUNCT_RE.findall(text)
        if self.strip_punctuation:
            tokens = [t for t in tokens if not _is_punct(t)]
        return tokens

    # TransformerMixin surface: stateless, fit is a no-op.
    def fit(self, X=None, y=None):
        self._check()
        return self

    def transform(self, X: Iterable[str]) -> list[TokenSeq]:
        return [self.tokenize(text) for text in X]

    __call__ = tokenize


def _is_punct(token: str) -> bool:
    return all(unicodedata.category(ch).startswith("P") for ch in token)


def tokenize(text: str, spec: Tokenizer | None = None) -> TokenSeq:
    """Tokenize one text under ``spec`` (default: word mode, lowercased)."""
    return (spec or Tokenizer()).tokenize(text)


def ngrams(seq: Sequence[str], n: int) -> Counter:
    """Sliding-window n-gram multiset; total count is max(0, len - n + 1)."""
    check_positive_int(n, "n")
    if n == 1:
        return Counter((t,) for t in seq)
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def _parse_jsonl_record(obj, path, line_no) -> Example:
    if not isinstance(obj, dict):
        raise ParseError("record is not a JSON object", path, line_no)
    if "source" not in obj:
        raise ParseError("record missing 'source' field", path, line_no)
    target = obj.get("target")
    if target is None:
        raise ParseError("record missing 'target' field", path, line_no)
    if isinstance(target, str):
        target = [target]
    if not isinstance(target, list) or not target:
        raise ParseError("'target' must be a nonempty string or list", path, line_no)
    rid = obj.get("id")
    rid = str(rid) if rid is not None else str(line_no)
    try:
        return Example(id=rid, source=str(obj["source"]), references=tuple(target))
    except ValidationError as exc:
        raise ParseError(str(exc), path, line_no) from exc


def _iter_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.strip():
                yield line_no, line


def load_examples(path, format: str = "jsonl") -> list[Example]:
    """Load one split file into example order-preserving list."""
    path = Path(path)
    examples: list[Example] = []
    if format == "jsonl":
        for line_no, line in _iter_lines(path):
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", path, line_no) from exc
            examples.append(_parse_jsonl_record(obj, path, line_no))
    elif format == "tsv":
        for line_no, line in _iter_lines(path):
            cells = line.split("\t")
            if len(cells) < 2:
                raise ParseError("expected source<TAB>target", path, line_no)
            source, targets = cells[0], [c for c in cells[1:]]
            try:
                examples.append(Example(id=str(line_no), source=source,
                                        references=tuple(targets)))
            except ValidationError as exc:
                raise ParseError(str(exc), path, line_no) from exc
    else:
        raise GenforgeError(f"unknown dataset format {format!r} (use jsonl or tsv)")
    if not examples:
        raise EmptyDatasetError(f"{path}: file contains no records")
    check_unique_ids([e.id for e in examples], str(path))
    return examples


def load_dataset(path, format: str = "jsonl", name: str | None = None,
                 split: str = "test") -> Dataset:
    """Load a single file as a one-split dataset."""
    path = Path(path)
    examples = load_examples(path, format=format)
    return Dataset(name=name or path.stem, splits={split: tuple(examples)})


def load_dataset_dir(directory, name: str | None = None) -> Dataset:
    """Discover ``<name>.{train,valid,test}.jsonl`` files in a directory."""
    directory = Path(directory)
    if name is None:
        stems = {p.name.split(".")[0] for p in directory.glob("*.jsonl")
                 if len(p.name.split(".")) == 3}
        if not stems:
            raise EmptyDatasetError(f"no <name>.<split>.jsonl files under {directory}")
        if len(stems) > 1:
            raise GenforgeError(
                f"multiple datasets under {directory}: {sorted(stems)}; pass name="
            )
        (name,) = stems
    splits = {}
    for split in SPLIT_NAMES:
        p = directory / f"{name}.{split}.jsonl"
        if p.exists():
            splits[split] = tuple(load_examples(p))
    if not splits:
        raise EmptyDatasetError(f"no splits found for dataset {name!r} in {directory}")
    return Dataset(name=name, splits=splits)


def open_dataset(path, name: str | None = None, split: str = "test",
                 format: str | None = None) -> Dataset:
    """Open a dataset from a split-file directory or a single split file."""
    path = Path(path)
    if path.is_dir():
        return load_dataset_dir(path, name=name)
    if format is None:
        format = "tsv" if path.suffix == ".tsv" else "jsonl"
    return load_dataset(path, format=format, name=name, split=split)


def save_dataset(dataset: Dataset, directory) -> list[Path]:
    """Write each split as ``<name>.<split>.jsonl``; inverse of load_dataset_dir."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for split, examples in dataset.splits.items():
        p = directory / f"{dataset.name}.{split}.jsonl"
        with open(p, "w", encoding="utf-8") as fh:
            for ex in examples:
                fh.write(json.dumps(ex.to_record(), ensure_ascii=False) + "\n")
        written.append(p)
    return written
