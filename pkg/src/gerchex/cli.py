"""Command-line entry points.

    gerchex label   --corpus reports.jsonl --lexicon lexicon/ --out labels.csv
                    [--radius N] [--threads N] [--mentions mentions.jsonl]
    gerchex eval    --pred labels.csv --gold gold.csv --out metrics.json
                    [--bootstrap N] [--seed S]
    gerchex lexicon validate --lexicon lexicon/
    gerchex serve   --lexicon lexicon/ --corpus reports.jsonl --store store/
                    --port N [--host H] [--static DIR]

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .corpus import label_to_value, labels_to_csv, read_corpus, read_labels
from .errors import ConfigurationError, DataError
from .evaluation import DEFAULT_SEED, evaluate, result_to_json
from .labeler import DEFAULT_RADIUS, label_batch
from .lexicon import load_abbreviations, load_lexicons, validate_lexicons
from .observations import ALL_CLASSES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="gerchex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    label = sub.add_parser("label", help="label a report corpus to a CSV")
    label.add_argument("--corpus", required=True, type=Path)
    label.add_argument("--lexicon", required=True, type=Path)
    label.add_argument("--out", required=True, type=Path)
    label.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    label.add_argument("--threads", type=int, default=1)
    label.add_argument("--mentions", type=Path, default=None,
                       help="also dump per-report mention provenance as JSON lines")

    ev = sub.add_parser("eval", help="score predicted labels against gold annotations")
    ev.add_argument("--pred", required=True, type=Path)
    ev.add_argument("--gold", required=True, type=Path)
    ev.add_argument("--out", required=True, type=Path)
    ev.add_argument("--bootstrap", type=int, default=None,
                    help="bootstrap resample count for 95%% CIs (e.g. 10000)")
    ev.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ev.add_argument("--workers", type=int, default=1)

    lex = sub.add_parser("lexicon", help="lexicon maintenance")
    lex_sub = lex.add_subparsers(dest="lexicon_command", required=True)
    validate = lex_sub.add_parser("validate", help="print lexicon diagnostics")
    validate.add_argument("--lexicon", required=True, type=Path)

    serve = sub.add_parser("serve", help="run the annotation service")
    serve.add_argument("--lexicon", required=True, type=Path)
    serve.add_argument("--corpus", required=True, type=Path)
    serve.add_argument("--store", required=True, type=Path)
    serve.add_argument("--port", required=True, type=int)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static", type=Path, default=None,
                       help="directory with the built browser UI")
    serve.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    return parser


def _cmd_label(args) -> int:
    if args.radius < 1:
        raise _UsageError(f"--radius must be >= 1, got {args.radius}")
    if args.threads < 1:
        raise _UsageError(f"--threads must be >= 1, got {args.threads}")
    phrases, triggers = load_lexicons(args.lexicon)
    abbreviations = load_abbreviations(args.lexicon)
    records = read_corpus(args.corpus)
    vectors = label_batch(
        records,
        phrases=phrases,
        triggers=triggers,
        radius=args.radius,
        abbreviations=abbreviations,
        worker_count=args.threads,
    )
    csv_text = labels_to_csv((v.report_id, v.labels) for v in vectors)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(csv_text, encoding="utf-8")
    if args.mentions is not None:
        with args.mentions.open("w", encoding="utf-8") as handle:
            for vector in vectors:
                handle.write(
                    json.dumps(
                        {
                            "report_id": vector.report_id,
                            "mentions": [
                                {
                                    "class": m.observation.value,
                                    "phrase": m.phrase.text,
                                    "span": list(m.char_span),
                                    "classification": m.classification.value,
                                    "cause": m.cause.entry.text if m.cause else None,
                                }
                                for m in vector.mentions
                            ],
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )
    print(f"labeled {len(vectors)} reports -> {args.out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    if args.bootstrap is not None and args.bootstrap < 1:
        raise _UsageError(f"--bootstrap must be >= 1, got {args.bootstrap}")
    pred = read_labels(args.pred)
    gold = read_labels(args.gold)
    result = evaluate(
        pred, gold, resamples=args.bootstrap, seed=args.seed, workers=args.workers
    )
    doc = result_to_json(result)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"evaluated {len(gold)} reports -> {args.out}")
    return EXIT_OK


def _cmd_lexicon_validate(args) -> int:
    phrases, triggers = load_lexicons(args.lexicon)
    diagnostics = validate_lexicons(phrases, triggers)
    for diag in diagnostics:
        print(f"{diag.severity}: {diag.message}")
    n_phrases = sum(
        len(phrases.phrases(c, p)) for c in phrases.entries for p in phrases.entries[c]
    )
    print(
        f"checked {n_phrases} phrases across {len(ALL_CLASSES) - 1} classes, "
        f"{len(triggers.entries)} triggers: {len(diagnostics)} diagnostics"
    )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import AnnotationService, create_app
    from .store import AnnotationStore

    if args.radius < 1:
        raise _UsageError(f"--radius must be >= 1, got {args.radius}")
    records = read_corpus(args.corpus)
    store = AnnotationStore(args.store)
    service = AnnotationService(args.lexicon, records, store, radius=args.radius)
    static = args.static
    if static is None:
        candidate = Path("frontend") / "dist"
        static = candidate if candidate.is_dir() else None
    app = create_app(service, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def cli_main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("GERCHEX_LOGLEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "label":
            return _cmd_label(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "lexicon":
            return _cmd_lexicon_validate(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
