"""Flat dotted-key experiment configuration: files, overrides, typed access.

Config files are plain text, one ``key = value`` per line, ``#`` comments.
Values are JSON literals where possible (numbers, booleans, quoted strings,
lists); anything that does not parse as JSON is kept as a raw string.  The
same dotted keys are accepted as command-line overrides, which win over file
values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..decode.search import DecodeParams
from ..errors import ConfigError, ParseError
from ..objectives import CorruptionSpec

DEFAULT_SEEDS = (2020, 2021, 2022)


def parse_config_text(text: str, path: str | None = None) -> dict:
    """Parse ``key = value`` lines into a flat dict of dotted keys."""
    flat: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", path, line_no)
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError("empty key", path, line_no)
        if key in flat:
            raise ParseError(f"duplicate key {key!r}", path, line_no)
        value = value.strip()
        try:
            flat[key] = json.loads(value)
        except json.JSONDecodeError:
            flat[key] = value
    return flat


def load_config(path) -> dict:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), str(path))


def config_to_text(flat: Mapping) -> str:
    """Emit a flat config, sorted by key; inverse of :func:`parse_config_text`."""
    lines = [f"{key} = {json.dumps(flat[key])}" for key in sorted(flat)]
    return "\n".join(lines) + "\n"


def _as_bool(value, key: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false", "1", "0",
                                                    "yes", "no"):
        return value.lower() in ("true", "1", "yes")
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _as_int(value, key: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _as_float(value, key: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _as_str_list(value, key: str) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{key}: expected a nonempty list, got {value!r}")
    return tuple(str(v) for v in value)


def _as_int_list(value, key: str) -> tuple[int, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{key}: expected a nonempty list, got {value!r}")
    return tuple(_as_int(v, key) for v in value)


def _as_str(value, key: str) -> str:
    return str(value)


def _as_opt_float(value, key: str):
    if value is None or value == "none" or value == "null":
        return None
    return _as_float(value, key)


# dotted key -> (coercer, default)
SCHEMA: dict[str, tuple] = {
    "dataset": (_as_str, ""),
    "split": (_as_str, "test"),
    "metrics": (_as_str_list, ("bleu", "rouge-l")),
    "objective": (_as_str, "bleu"),
    "seeds": (_as_int_list, DEFAULT_SEEDS),
    "model.order": (_as_int, 2),
    "model.add_k": (_as_float, 1.0),
    "model.copy_weight": (_as_float, 0.3),
    "decode.strategy": (_as_str, "beam"),
    "decode.beam_size": (_as_int, 5),
    "decode.max_len": (_as_int, 32),
    "decode.no_repeat_ngram": (_as_int, 3),
    "decode.length_penalty": (_as_float, 1.0),
    "decode.k": (_as_int, 10),
    "decode.p": (_as_float, 1.0),
    "decode.temperature": (_as_float, 1.0),
    "decode.block_source": (_as_bool, False),
    "corrupt.objective": (_as_str, "denoising"),
    "corrupt.mask_ratio": (_as_opt_float, None),
    "corrupt.mean_span": (_as_float, 3.0),
    "corrupt.permute_sentences": (_as_bool, False),
    "corrupt.seed": (_as_int, 0),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view over the flat dotted-key config."""

    values: dict

    def __post_init__(self):
        if not self.values["seeds"]:
            raise ConfigError("seeds must not be empty")
        if self.values["objective"] not in self.values["metrics"]:
            raise ConfigError(
                f"objective {self.values['objective']!r} is not in the "
                f"requested metric list {list(self.values['metrics'])}"
            )

    @classmethod
    def from_flat(cls, flat: Mapping) -> "ExperimentConfig":
        unknown = sorted(set(flat) - set(SCHEMA))
        if unknown:
            raise ConfigError(
                f"unknown config key(s) {unknown}; valid keys: "
                f"{', '.join(sorted(SCHEMA))}"
            )
        values = {}
        for key, (coerce, default) in SCHEMA.items():
            values[key] = coerce(flat[key], key) if key in flat else default
        return cls(values=values)

    @classmethod
    def default(cls) -> "ExperimentConfig":
        return cls.from_flat({})

    def to_flat(self) -> dict:
        out = {}
        for key, value in self.values.items():
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    def with_overrides(self, overrides: Mapping) -> "ExperimentConfig":
        flat = self.to_flat()
        flat.update(overrides)
        return ExperimentConfig.from_flat(flat)

    # -- typed accessors ----------------------------------------------------

    @property
    def dataset(self) -> str:
        return self.values["dataset"]

    @property
    def split(self) -> str:
        return self.values["split"]

    @property
    def metrics(self) -> tuple[str, ...]:
        return self.values["metrics"]

    @property
    def objective(self) -> str:
        return self.values["objective"]

    @property
    def seeds(self) -> tuple[int, ...]:
        return self.values["seeds"]

    def model_params(self) -> dict:
        return {"order": self.values["model.order"],
                "add_k": self.values["model.add_k"],
                "copy_weight": self.values["model.copy_weight"]}

    def decode_params(self, seed: int = 0) -> DecodeParams:
        return DecodeParams(
            strategy=self.values["decode.strategy"],
            beam_size=self.values["decode.beam_size"],
            max_len=self.values["decode.max_len"],
            no_repeat_ngram=self.values["decode.no_repeat_ngram"],
            length_penalty=self.values["decode.length_penalty"],
            k=self.values["decode.k"],
            p=self.values["decode.p"],
            temperature=self.values["decode.temperature"],
            block_source=self.values["decode.block_source"],
            seed=seed,
        )

    def corruption_spec(self, seed: int | None = None) -> CorruptionSpec:
        return CorruptionSpec(
            objective=self.values["corrupt.objective"],
            mask_ratio=self.values["corrupt.mask_ratio"],
            mean_span=self.values["corrupt.mean_span"],
            permute_sentences=self.values["corrupt.permute_sentences"],
            seed=self.values["corrupt.seed"] if seed is None else seed,
        )
