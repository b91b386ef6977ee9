"""Command-line entry point: eval, decode, corrupt, search, analyze, leaderboard.

Exit codes: 0 success, 1 domain error (bad data, failed invariant), 2 usage
error (argparse).  Diagnostics go to stderr; data goes to stdout or files.
Every flag that mirrors a config key (``--decode.beam_size`` and friends)
overrides the ``--config`` file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    AnalysisReport,
    bucket_scores,
    compare_models,
    leaderboard_load,
    leaderboard_path,
    leaderboard_render,
    leaderboard_update,
    render_report,
)
from .analysis.leaderboard import LeaderboardEntry
from .corpus import Dataset, Tokenizer, open_dataset
from .decode.ngram_lm import NGramLanguageModel
from .decode.search import decode_corpus
from .errors import AlignmentError, ConfigError, GenforgeError, ParseError
from .harness.config import SCHEMA, ExperimentConfig, config_to_text, load_config
from .harness.search import (
    SearchSpace,
    grid_search,
    random_search,
    results_to_tsv,
    write_search_outputs,
)
from .metrics.report import GenerationRecord, evaluate
from .objectives import corrupt, derive_seed

_CONFIG_DEST_PREFIX = "cfgkey__"


def _dotted_dest(key: str) -> str:
    return _CONFIG_DEST_PREFIX + key.replace(".", "__")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE",
                        help="flat key = value config file")
    parser.add_argument("--dump-config", action="store_true",
                        help="print the fully resolved config and exit")
    group = parser.add_argument_group("config overrides")
    for key in sorted(SCHEMA):
        try:
            group.add_argument(f"--{key}", dest=_dotted_dest(key), metavar="V",
                               help=argparse.SUPPRESS)
        except argparse.ArgumentError:
            # A subcommand already exposes this key as a visible flag; the
            # visible flag feeds the same config slot via its shorthand map.
            continue


def _resolve_config(args, shorthand: dict | None = None, *,
                    objective_tracks_metrics: bool = False) -> ExperimentConfig:
    flat: dict = {}
    if getattr(args, "config", None):
        flat.update(load_config(args.config))
    if shorthand:
        flat.update({k: v for k, v in shorthand.items() if v is not None})
    for key in SCHEMA:
        value = getattr(args, _dotted_dest(key), None)
        if value is not None:
            flat[key] = value
    if objective_tracks_metrics and "metrics" in flat and "objective" not in flat:
        # Commands that never rank by an objective shouldn't force the user
        # to keep the (search-only) objective key aligned with the metric
        # list; follow the list instead.
        metrics = flat["metrics"]
        names = ([m.strip() for m in metrics.split(",") if m.strip()]
                 if isinstance(metrics, str) else list(metrics))
        if names:
            flat["objective"] = names[0]
    return ExperimentConfig.from_flat(flat)


def _maybe_dump(args, config: ExperimentConfig) -> bool:
    if getattr(args, "dump_config", False):
        sys.stdout.write(config_to_text(config.to_flat()))
        return True
    return False


def _emit_jsonl(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def _load_hypotheses(path) -> dict[str, str]:
    """Read decode-style JSONL ({"id", "hypothesis", ...}) into an id map."""
    path = Path(path)
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", str(path),
                                 line_no) from exc
            if not isinstance(obj, dict) or "id" not in obj \
                    or "hypothesis" not in obj:
                raise ParseError('expected {"id": ..., "hypothesis": ...}',
                                 str(path), line_no)
            rid = str(obj["id"])
            if rid in out:
                raise ParseError(f"duplicate id {rid!r}", str(path), line_no)
            out[rid] = str(obj["hypothesis"])
    if not out:
        raise ParseError("file contains no records", str(path))
    return out


def _paired_records(examples, hyp_map: dict[str, str],
                    label: str) -> list[GenerationRecord]:
    ref_ids = [ex.id for ex in examples]
    missing = sorted(set(ref_ids) - set(hyp_map))
    extra = sorted(set(hyp_map) - set(ref_ids))
    if missing or extra:
        raise AlignmentError(
            f"{label}: ids missing from hypotheses {missing}, "
            f"ids not in references {extra}"
        )
    return [GenerationRecord(id=ex.id, hypothesis=hyp_map[ex.id],
                             references=ex.references, source=ex.source)
            for ex in examples]


def _fit_model(config: ExperimentConfig, dataset: Dataset, split: str
               ) -> NGramLanguageModel:
    examples = dataset[split]
    train = dataset.splits.get("train", examples)
    return NGramLanguageModel(**config.model_params()).fit(train)


# -- subcommand handlers ----------------------------------------------------


def _cmd_eval(args) -> int:
    config = _resolve_config(args, {"metrics": args.metrics},
                             objective_tracks_metrics=True)
    if _maybe_dump(args, config):
        return 0
    refs = open_dataset(args.ref, split=args.split)[args.split]
    records = _paired_records(refs, _load_hypotheses(args.hyp), "eval")
    side = None
    if args.side_scores:
        side = json.loads(Path(args.side_scores).read_text(encoding="utf-8"))
    tokenizer = Tokenizer(mode=args.tokenizer_mode)
    report = evaluate(records, config.metrics, tokenizer=tokenizer,
                      side_scores=side)
    sys.stdout.write(json.dumps(report.to_json_dict(), sort_keys=True,
                                indent=2) + "\n")
    return 0


def _cmd_decode(args) -> int:
    shorthand = {
        "model.order": args.order,
        "decode.beam_size": args.beam,
        "decode.max_len": args.max_len,
        "decode.no_repeat_ngram": args.no_repeat_ngram,
        "decode.strategy": args.strategy,
        "split": args.split,
    }
    config = _resolve_config(args, shorthand, objective_tracks_metrics=True)
    if _maybe_dump(args, config):
        return 0
    if args.scorer != "ngram":
        raise ConfigError(f"unknown scorer {args.scorer!r} (only: ngram)")
    dataset = open_dataset(args.dataset, split=config.split)
    examples = dataset[config.split]
    model = _fit_model(config, dataset, config.split)
    params = config.decode_params(seed=args.seed)
    for example, hyp in zip(examples,
                            decode_corpus(model,
                                          [ex.source for ex in examples],
                                          params)):
        _emit_jsonl({"id": example.id, "hypothesis": hyp.text,
                     "score": hyp.score})
    return 0


def _cmd_corrupt(args) -> int:
    shorthand = {
        "corrupt.objective": args.objective,
        "corrupt.mask_ratio": args.mask_ratio,
        "corrupt.mean_span": args.mean_span,
        "corrupt.seed": args.seed,
        "split": args.split,
    }
    if args.permute_sentences:
        shorthand["corrupt.permute_sentences"] = True
    config = _resolve_config(args, shorthand, objective_tracks_metrics=True)
    if _maybe_dump(args, config):
        return 0
    dataset = open_dataset(args.dataset, split=config.split)
    base = config.corruption_spec()
    for example in dataset[config.split]:
        spec = config.corruption_spec(seed=derive_seed(base.seed, example.id))
        pair = corrupt(example.source.split(), spec)
        _emit_jsonl({"id": example.id, **pair.to_record()})
    return 0


def _cmd_search(args) -> int:
    shorthand = {"seeds": args.seeds, "objective": args.objective,
                 "metrics": args.metrics, "dataset": args.dataset,
                 "split": args.split}
    config = _resolve_config(args, shorthand)
    if _maybe_dump(args, config):
        return 0
    space = SearchSpace.from_file(args.space)
    if args.budget is None:
        outcome = grid_search(space, config, workers=args.workers)
    else:
        outcome = random_search(space, config, budget=args.budget,
                                seed=args.search_seed, workers=args.workers)
    paths = write_search_outputs(outcome, config, args.out)
    sys.stdout.write(results_to_tsv(outcome.trials))
    print(f"wrote {paths['tsv']}, {paths['json']}, {paths['best']}",
          file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    config = _resolve_config(args, {"split": args.split},
                             objective_tracks_metrics=True)
    if _maybe_dump(args, config):
        return 0
    if args.bucket_by != "source-length":
        raise ConfigError(
            f"unknown bucketing {args.bucket_by!r} (only: source-length)"
        )
    edges = tuple(int(e) for e in args.edges.split(",")) if args.edges \
        else None
    dataset = open_dataset(args.dataset, split=config.split)
    examples = dataset[config.split]
    records_a = _paired_records(examples, _load_hypotheses(args.hyp), "hyp")
    tokenizer = Tokenizer()
    report_a = evaluate(records_a, [args.metric], tokenizer=tokenizer)
    per_sample = report_a.per_sample.get(args.metric)
    if per_sample is None:
        raise ConfigError(
            f"metric {args.metric!r} has no per-sample scores to analyze"
        )
    sources = [ex.source for ex in examples]
    kwargs = {"edges": edges} if edges else {}
    buckets = bucket_scores(sources, per_sample, tokenizer=tokenizer, **kwargs)
    comparison = None
    if args.hyp2:
        records_b = _paired_records(examples, _load_hypotheses(args.hyp2),
                                    "hyp2")
        report_b = evaluate(records_b, [args.metric], tokenizer=tokenizer)
        comparison = compare_models(records_a, records_b, report_a, report_b,
                                    args.metric, tokenizer=tokenizer,
                                    **kwargs)
    bundle = AnalysisReport(
        title=f"{dataset.name} / {args.metric}", metric=args.metric,
        corpus_scores=report_a.corpus, buckets=buckets, comparison=comparison,
    )
    document = render_report(bundle, fmt=args.format)
    if args.out:
        Path(args.out).write_text(document, encoding="utf-8")
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(document)
    return 0


def _parse_score_pairs(pairs: list[str]) -> dict[str, float]:
    scores = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"--score expects name=value, got {pair!r}")
        try:
            scores[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--score {name!r}: {value!r} is not a number") \
                from None
    return scores


def _cmd_leaderboard(args) -> int:
    path = leaderboard_path(args.dir, args.dataset)
    if args.action == "add":
        scores = {}
        if args.scores:
            scores.update(json.loads(Path(args.scores)
                                     .read_text(encoding="utf-8")))
        scores.update(_parse_score_pairs(args.score or []))
        entry = LeaderboardEntry(model=args.model, dataset=args.dataset,
                                 scores=scores, source=args.source or "",
                                 texts_path=args.texts)
        leaderboard_update(path, entry,
                           external_metrics=tuple(args.external_metric or ()))
        print(f"updated {path}", file=sys.stderr)
        return 0
    store = leaderboard_load(path)
    sys.stdout.write(leaderboard_render(store, args.primary))
    return 0


# -- parser wiring ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genforge",
        description="Text-generation evaluation, corruption, decoding, "
                    "search, and analysis.",
    )
    parser.add_argument("--version", action="version",
                        version=f"genforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{eval,decode,corrupt,search,analyze,leaderboard}")

    p = sub.add_parser("eval", help="score hypotheses against references")
    p.add_argument("--hyp", required=True, help="JSONL with id + hypothesis")
    p.add_argument("--ref", required=True,
                   help="reference dataset (JSONL/TSV file or split dir)")
    p.add_argument("--split", default="test")
    p.add_argument("--metrics", help="comma list, e.g. bleu,rouge-l")
    p.add_argument("--side-scores", help="JSON file with inform/success/...")
    p.add_argument("--tokenizer-mode", default="word",
                   choices=("word", "whitespace", "char"))
    _add_config_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("decode", help="decode a dataset with the toy LM")
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default=None)
    p.add_argument("--scorer", default="ngram")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--beam", type=int, default=None)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--no-repeat-ngram", type=int, default=None)
    p.add_argument("--strategy", default=None,
                   choices=("greedy", "beam", "topk", "topp"))
    p.add_argument("--seed", type=int, default=0)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("corrupt", help="emit corrupted pre-training pairs")
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--objective", default=None,
                   choices=("lm", "masked-seq2seq", "denoising",
                            "span-prediction"))
    p.add_argument("--mask-ratio", type=float, default=None)
    p.add_argument("--mean-span", type=float, default=None)
    p.add_argument("--permute-sentences", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("search", help="grid/random hyper-parameter search")
    p.add_argument("--space", required=True, help="space config file")
    p.add_argument("--dataset", default=None)
    p.add_argument("--split", default=None)
    p.add_argument("--budget", type=int, default=None,
                   help="random-search trial count (omit for full grid)")
    p.add_argument("--search-seed", type=int, default=0)
    p.add_argument("--seeds", default=None, help="comma list, e.g. 2020,2021")
    p.add_argument("--objective", default=None)
    p.add_argument("--metrics", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="search-results")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("analyze", help="bucket scores, compare models, render")
    p.add_argument("--hyp", required=True)
    p.add_argument("--hyp2", default=None)
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default=None)
    p.add_argument("--metric", default="rouge-l")
    p.add_argument("--bucket-by", default="source-length")
    p.add_argument("--edges", default=None, help="comma list of bucket edges")
    p.add_argument("--format", default="json", choices=("json", "html"))
    p.add_argument("--out", default=None)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("leaderboard", help="update or render leaderboards")
    actions = p.add_subparsers(dest="action", required=True)
    add = actions.add_parser("add", help="upsert one model's scores")
    add.add_argument("--dir", default="leaderboards")
    add.add_argument("--dataset", required=True)
    add.add_argument("--model", required=True)
    add.add_argument("--scores", help="JSON file {metric: score}")
    add.add_argument("--score", action="append", metavar="NAME=VALUE")
    add.add_argument("--source", default="")
    add.add_argument("--texts", default=None)
    add.add_argument("--external-metric", action="append")
    add.set_defaults(func=_cmd_leaderboard, action="add")
    show = actions.add_parser("show", help="render one dataset's leaderboard")
    show.add_argument("--dir", default="leaderboards")
    show.add_argument("--dataset", required=True)
    show.add_argument("--primary", default="bleu",
                      help="metric to sort by, descending")
    show.set_defaults(func=_cmd_leaderboard, action="show")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenforgeError as exc:
        print(f"genforge {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"genforge {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
