"""Batch command-line interface.

Subcommands: score, classify, keywords, train, filter, scan, serve.
stdout carries data (JSON documents with stable field order), stderr
carries diagnostics. Exit codes: 0 success, 1 operational error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import service as service_mod
from .extraction import PatternError, load_patterns_file
from .lexicon import Lexicon, LexiconError, default_lexicon, load_lexicon_file, score
from .pipeline import (
    FilterDeps,
    Mode,
    ProfileError,
    UserProfile,
    filter_document,
    load_profile_file,
    scan_page,
)
from .textmodel import (
    IngestError,
    ModelError,
    extract_keywords,
    ingest_csv,
    load_model,
    predict,
    save_model,
    train,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


class OperationalError(Exception):
    """Bad input data or unreadable files; maps to exit code 1."""


def _positive_float(value: str) -> float:
    number = float(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return number


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return number


def _add_text_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="text to process")
    group.add_argument("--stdin", action="store_true", help="read text from stdin")


def _read_text(args: argparse.Namespace) -> str:
    if args.stdin:
        return sys.stdin.read()
    return args.text


def _load_lexicon(path: str | None) -> Lexicon:
    if path is None:
        return default_lexicon()
    try:
        return load_lexicon_file(path)
    except (OSError, LexiconError) as exc:
        raise OperationalError(f"cannot load lexicon: {exc}") from exc


def _load_profile(path: str | None) -> UserProfile:
    if path is None:
        return UserProfile()
    try:
        return load_profile_file(path)
    except (OSError, ProfileError) as exc:
        raise OperationalError(f"cannot load profile: {exc}") from exc


def _print_json(document: dict) -> None:
    json.dump(document, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detox", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    score_parser = commands.add_parser("score", help="lexicon sentiment score")
    _add_text_source(score_parser)
    score_parser.add_argument("--profile", help="profile JSON path")
    score_parser.add_argument("--lexicon", help="lexicon TSV path (default: bundled)")

    classify_parser = commands.add_parser("classify", help="predict a category")
    _add_text_source(classify_parser)
    classify_parser.add_argument("--model", required=True, help="trained model path")

    keywords_parser = commands.add_parser("keywords", help="term-frequency keywords")
    _add_text_source(keywords_parser)
    keywords_parser.add_argument("-k", type=_positive_int, default=5, help="tag count")

    train_parser = commands.add_parser("train", help="train the category classifier")
    train_parser.add_argument("--csv", required=True, help="headlines CSV path")
    train_parser.add_argument("--top", type=_positive_int, default=50, help="class cap")
    train_parser.add_argument("--alpha", type=_positive_float, default=1.0, help="smoothing")
    train_parser.add_argument("--out", required=True, help="model output path")

    filter_parser = commands.add_parser("filter", help="filter an HTML document")
    filter_parser.add_argument("--in", dest="input", required=True, help="input HTML path")
    filter_parser.add_argument("--patterns", required=True, help="pattern config path")
    filter_parser.add_argument("--profile", help="profile JSON path")
    filter_parser.add_argument("--mode", choices=["search", "page"], default="search")
    filter_parser.add_argument("--out", required=True, help="rewritten HTML path")
    filter_parser.add_argument("--decisions", help="write decisions JSON here")
    filter_parser.add_argument("--model", help="model for deep analysis of flagged items")
    filter_parser.add_argument("--lexicon", help="lexicon TSV path (default: bundled)")

    scan_parser = commands.add_parser("scan", help="scan content for blacklist hits")
    _add_text_source(scan_parser)
    scan_parser.add_argument("--site", required=True, help="hostname of the page")
    scan_parser.add_argument("--profile", help="profile JSON path")

    serve_parser = commands.add_parser("serve", help="run the HTTP service")
    serve_parser.add_argument("--patterns-dir", help="directory of pattern configs")
    serve_parser.add_argument("--profile-path", help="profile store path")
    serve_parser.add_argument("--host")
    serve_parser.add_argument("--port", type=int)
    serve_parser.add_argument("--model", help="trained model path")
    serve_parser.add_argument("--lexicon", help="lexicon TSV path")
    serve_parser.add_argument("--profanity", help="profanity list path")

    return parser


def _cmd_score(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon(args.lexicon)
    profile = _load_profile(args.profile)
    report = score(_read_text(args), lexicon, profile.overrides, profile.sensitivity)
    _print_json(report.to_dict())
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    try:
        model = load_model(args.model)
    except (OSError, ModelError) as exc:
        raise OperationalError(f"cannot load model: {exc}") from exc
    _print_json(predict(model, _read_text(args)).to_dict())
    return EXIT_OK


def _cmd_keywords(args: argparse.Namespace) -> int:
    _print_json(extract_keywords(_read_text(args), None, args.k).to_dict())
    return EXIT_OK


def _cmd_train(args: argparse.Namespace) -> int:
    try:
        with open(args.csv, encoding="utf-8", newline="") as handle:
            corpus = ingest_csv(handle, class_cap=args.top)
    except (OSError, IngestError) as exc:
        raise OperationalError(f"cannot ingest CSV: {exc}") from exc
    model = train(corpus, alpha=args.alpha)
    save_model(model, args.out)
    _print_json(
        {
            "classes": len(model.classes),
            "rows_used": len(corpus.rows),
            "rows_dropped": corpus.dropped,
            "vocab_size": model.vocab_size,
            "model_path": str(args.out),
        }
    )
    return EXIT_OK


def _cmd_filter(args: argparse.Namespace) -> int:
    try:
        html = Path(args.input).read_text("utf-8")
    except OSError as exc:
        raise OperationalError(f"cannot read input: {exc}") from exc
    try:
        patterns = load_patterns_file(args.patterns)
    except (OSError, PatternError) as exc:
        raise OperationalError(f"cannot load patterns: {exc}") from exc
    profile = _load_profile(args.profile)
    model = None
    if args.model:
        try:
            model = load_model(args.model)
        except (OSError, ModelError) as exc:
            raise OperationalError(f"cannot load model: {exc}") from exc
    deps = FilterDeps(lexicon=_load_lexicon(args.lexicon), model=model)
    result = filter_document(html, patterns, profile, deps, Mode(args.mode))
    try:
        Path(args.out).write_text(result.html, "utf-8")
    except OSError as exc:
        raise OperationalError(f"cannot write output: {exc}") from exc
    if args.decisions:
        document = {"decisions": [d.to_dict() for d in result.decisions]}
        Path(args.decisions).write_text(json.dumps(document, indent=2) + "\n", "utf-8")
    _print_json(result.health.to_dict())
    if result.health.status == "Degraded":
        print(
            "warning: patterns returned no results on a page with links; "
            "selectors may be out of date",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_scan(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    _print_json(scan_page(_read_text(args), args.site, profile).to_dict())
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    overrides: dict = {}
    if args.patterns_dir:
        overrides["patterns_dir"] = Path(args.patterns_dir)
    if args.profile_path:
        overrides["profile_path"] = Path(args.profile_path)
    if args.host:
        overrides["host"] = args.host
    if args.port:
        overrides["port"] = args.port
    if args.model:
        overrides["model_path"] = Path(args.model)
    if args.lexicon:
        overrides["lexicon_path"] = Path(args.lexicon)
    if args.profanity:
        overrides["profanity_path"] = Path(args.profanity)
    try:
        config = service_mod.ServiceConfig.from_env(**overrides)
        config.validate_paths()
    except (service_mod.ConfigError, ValueError) as exc:
        raise OperationalError(str(exc)) from exc
    service_mod.serve(config)
    return EXIT_OK


_COMMANDS = {
    "score": _cmd_score,
    "classify": _cmd_classify,
    "keywords": _cmd_keywords,
    "train": _cmd_train,
    "filter": _cmd_filter,
    "scan": _cmd_scan,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OperationalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
