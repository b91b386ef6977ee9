"""One JSON leaderboard file per dataset, updated atomically."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError, ParseError, ValidationError
from ..metrics.report import REGISTRY_NAMES


@dataclass(frozen=True)
class LeaderboardEntry:
    """One model's scores on one dataset, with attribution."""

    model: str
    dataset: str
    scores: dict[str, float]
    source: str = ""  # citation string or run id
    texts_path: str | None = None

    def __post_init__(self):
        if not self.model:
            raise ValidationError("entry needs a model name")
        if not self.dataset:
            raise ValidationError("entry needs a dataset name")
        if not self.scores:
            raise ValidationError("entry needs at least one score")

    def to_json_dict(self) -> dict:
        return {"model": self.model, "dataset": self.dataset,
                "scores": dict(self.scores), "source": self.source,
                "texts_path": self.texts_path}


def entry_from_dict(raw: dict) -> LeaderboardEntry:
    return LeaderboardEntry(model=raw["model"], dataset=raw["dataset"],
                            scores=dict(raw["scores"]),
                            source=raw.get("source", ""),
                            texts_path=raw.get("texts_path"))


def leaderboard_path(directory: str | Path, dataset: str) -> Path:
    return Path(directory) / f"{dataset}.json"


def leaderboard_load(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        return {"dataset": None, "external_metrics": [], "entries": []}
    try:
        store = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}", path=str(path)) from exc
    store.setdefault("external_metrics", [])
    store.setdefault("entries", [])
    return store


def _write_atomic(path: Path, store: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(store, sort_keys=True, indent=2) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def leaderboard_update(path: str | Path, entry: LeaderboardEntry,
                       external_metrics: tuple[str, ...] = ()) -> dict:
    """Upsert ``entry`` by (model, dataset) and rewrite the store atomically.

    Score names must come from the metric registry or be declared external
    (here or in a previous update).
    """
    path = Path(path)
    store = leaderboard_load(path)
    if store["dataset"] is None:
        store["dataset"] = entry.dataset
    elif store["dataset"] != entry.dataset:
        raise ValidationError(
            f"store {path} is for dataset {store['dataset']!r}, "
            f"entry is for {entry.dataset!r}"
        )
    declared = set(store["external_metrics"]) | set(external_metrics)
    unknown = sorted(set(entry.scores) - set(REGISTRY_NAMES) - declared)
    if unknown:
        raise ValidationError(
            f"score names {unknown} are neither registry metrics nor "
            "declared external metrics"
        )
    store["external_metrics"] = sorted(declared)
    entries = [e for e in store["entries"]
               if not (e["model"] == entry.model
                       and e["dataset"] == entry.dataset)]
    entries.append(entry.to_json_dict())
    entries.sort(key=lambda e: (e["model"], e["dataset"]))
    store["entries"] = entries
    _write_atomic(path, store)
    return store


def leaderboard_render(store: dict, primary_metric: str) -> str:
    """Plain-text table of a store's entries, best primary metric first."""
    known = set(REGISTRY_NAMES) | set(store.get("external_metrics", []))
    if primary_metric not in known:
        raise ConfigError(
            f"unknown primary metric {primary_metric!r}; expected a registry "
            "metric or one of the store's external metrics"
        )
    entries = [entry_from_dict(e) for e in store.get("entries", [])]
    entries.sort(key=lambda e: (-e.scores.get(primary_metric, float("-inf")),
                                e.model))
    columns = sorted({name for e in entries for name in e.scores})
    header = ["model"] + columns + ["source"]
    rows = [header]
    for e in entries:
        rows.append([e.model]
                    + [f"{e.scores[c]:.2f}" if c in e.scores else "-"
                       for c in columns]
                    + [e.source])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i])
                               for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    dataset = store.get("dataset") or "(empty)"
    title = f"leaderboard: {dataset} (by {primary_metric})"
    return "\n".join([title, ""] + lines) + "\n"
