"""Command-line interface.

Subcommands: index, search, ask, augment, run-batch, eval, compare, serve.
All configuration lives in one JSON file (``--config``); the bundled testbed
and fully deterministic providers are used when no config is given. Exit
code 0 on success, nonzero on any hard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .corpus import KNOWN, load_test_collection, validate
from .engine import Engine
from .generation import RemoteChatGenerator
from .harness import (
    EvalReport,
    compare,
    emit_report,
    evaluate,
    load_artifacts,
    run_batch,
    write_question_qrels,
)
from .intent import generate_paraphrases, select_variations
from .ranking import trec_lines


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig.default()
    if getattr(args, "pipeline", None):
        config.pipelines = tuple(args.pipeline)
    if getattr(args, "cutoff", None):
        config.cutoffs = tuple(args.cutoff)
    if getattr(args, "alpha", None) is not None:
        config.alpha = args.alpha
    return config


def _load_collection(config: RunConfig):
    return load_test_collection(
        config.data.passages, config.data.questions, config.data.answers, config.data.qrels
    )


def cmd_index(args: argparse.Namespace) -> int:
    config = _load_config(args)
    collection = _load_collection(config)
    report = validate(collection)
    for violation in report.violations:
        print(f"warning: {violation}", file=sys.stderr)
    engine = Engine(collection, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "bm25_index.json", "w", encoding="utf-8") as fh:
        json.dump(engine.index.to_dict(), fh)
    engine.store.save(out / "dense_store.npz")
    write_question_qrels(collection, out / "question_qrels.txt")
    counts = collection.type_counts()
    print(
        f"indexed {engine.index.doc_count} passages "
        f"(avg length {engine.index.avg_doc_length:.2f} tokens), "
        f"{len(collection.questions)} questions "
        f"({counts['known']}/{counts['inferred']}/{counts['out_of_kb']} known/inferred/out-of-kb)"
    )
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    config = _load_config(args)
    engine = Engine(_load_collection(config), config)
    mode = args.pipeline[0] if args.pipeline else "rag-bm25"
    if mode == "ib":
        print("search requires a retrieval pipeline (rag-bm25 or rag-dense)", file=sys.stderr)
        return 2
    cutoff = args.cutoff[0] if args.cutoff else 5
    ranking = engine.retriever(mode)(args.query, cutoff, "cli")
    for line in trec_lines(ranking, config.run_tag):
        print(line)
    return 0


def cmd_ask(args: argparse.Namespace) -> int:
    config = _load_config(args)
    engine = Engine(_load_collection(config), config)
    mode = args.pipeline[0] if args.pipeline else "rag-bm25"
    cutoff = args.cutoff[0] if args.cutoff else (3 if 3 in engine.cutoffs else engine.cutoffs[0])
    result, ranking, timings = engine.answer(args.question, mode, cutoff)
    payload = result.to_dict()
    payload["passages"] = [
        {
            "id": e.passage_id,
            "text": engine.collection.passages.get(e.passage_id).text,
            "score": e.score,
            "rank": rank,
        }
        for rank, e in enumerate(ranking.entries, start=1)
    ]
    payload["timings"] = timings
    print(json.dumps(payload, indent=2, ensure_ascii=False))
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    config = _load_config(args)
    collection = _load_collection(config)
    endpoint = args.endpoint or config.generator.endpoint
    if not endpoint:
        print("augment needs a chat endpoint (--endpoint or generator.endpoint)", file=sys.stderr)
        return 2
    client = RemoteChatGenerator(endpoint, headers=config.generator.headers())
    seen: set[str] = set()
    written = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for question in collection.questions:
            if question.qtype != KNOWN or question.topic in seen:
                continue
            seen.add(question.topic)
            raw = generate_paraphrases(client, question.text, max_n=args.max_n)
            chosen = select_variations(raw, keep=args.keep, canonical=question.text)
            fh.write(
                json.dumps({"topic": question.topic, "variations": chosen}, ensure_ascii=False)
                + "\n"
            )
            written += 1
    print(f"wrote paraphrases for {written} topics to {args.out}")
    return 0


def cmd_run_batch(args: argparse.Namespace) -> int:
    config = _load_config(args)
    collection = _load_collection(config)
    artifacts = run_batch(collection, config, args.out)
    total_failures = sum(artifacts.failures.values())
    print(f"wrote {len(artifacts.systems)} systems to {artifacts.out_dir}")
    if total_failures:
        print(f"warning: {total_failures} question answers failed", file=sys.stderr)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = _load_config(args)
    collection = _load_collection(config)
    report = evaluate(load_artifacts(args.runs), collection, config)
    comparison = None
    if args.significance and len(report.systems) >= 2:
        comparison = compare([report], config.alpha)
    rendered = emit_report(report, args.format, comparison)
    if args.out:
        report.save(args.out)
        print(f"report written to {args.out}")
    print(rendered, end="")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    config = _load_config(args)
    reports = [EvalReport.load(p) for p in args.reports]
    comparison = compare(reports, config.alpha)
    if args.out:
        comparison.save(args.out)
        print(f"significance matrix written to {args.out}")
    if args.format == "json":
        print(json.dumps(comparison.to_dict(), indent=2, sort_keys=True))
    else:
        merged = reports[0]
        for extra in reports[1:]:
            merged.systems.extend(extra.systems)
        print(emit_report(merged, "table", comparison), end="")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args)
    engine = Engine(_load_collection(config), config)
    ui_dir = Path(args.ui) if args.ui else None
    app = create_app(engine, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faqkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="JSON config file")
        p.add_argument(
            "--pipeline",
            action="append",
            choices=["ib", "rag-bm25", "rag-dense"],
            help="pipeline override (repeatable)",
        )
        p.add_argument("--cutoff", action="append", type=int, help="cutoff override (repeatable)")
        p.add_argument("--alpha", type=float, default=None, help="significance level")

    p = sub.add_parser("index", help="build and persist the retrieval indexes")
    common(p)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="rank passages for one query")
    common(p)
    p.add_argument("query")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("ask", help="answer one question through a pipeline")
    common(p)
    p.add_argument("question")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("augment", help="generate paraphrase variations for known topics")
    common(p)
    p.add_argument("--endpoint", default=None, help="chat endpoint for paraphrase generation")
    p.add_argument("--max-n", type=int, default=8, dest="max_n")
    p.add_argument("--keep", type=int, default=5)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("run-batch", help="run configured pipelines over the collection")
    common(p)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_run_batch)

    p = sub.add_parser("eval", help="score a batch run")
    common(p)
    p.add_argument("--runs", type=Path, required=True, help="run-batch output directory")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    p.add_argument(
        "--no-significance", dest="significance", action="store_false", default=True
    )
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="Tukey HSD significance across reports")
    common(p)
    p.add_argument("reports", nargs="+", type=Path)
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="start the chat service")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui", default=None, help="directory of built web UI assets")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
