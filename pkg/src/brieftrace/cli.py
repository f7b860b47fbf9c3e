"""Command-line workflow around a workspace directory.

A workspace accumulates the run's artifacts step by step:

    corpus_meta.json   written by `ingest`; points at the manifest
    snippets.idx       written by `index`
    records.jsonl      written by `extract`; every match with its flags
    run_params.json    written by `extract`; the matcher parameters used
    review_set.json    written by `sample`
    labels.jsonl       appended by the review service while `serve` runs

Every step is deterministic: re-running a step over unchanged inputs writes
byte-identical files, so diffs on workspace files always mean input changes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import Corpus, CorpusError, load_manifest
from .matcher import MatchParams
from .pipeline import (
    ReviewSet,
    SnippetRecord,
    briefs_histogram,
    export_report,
    extract_candidates,
    select_review_set,
)
from .provenance import build_index, load_index

META_FILE = "corpus_meta.json"
INDEX_FILE = "snippets.idx"
RECORDS_FILE = "records.jsonl"
PARAMS_FILE = "run_params.json"
REVIEW_FILE = "review_set.json"
LABELS_FILE = "labels.jsonl"


class WorkspaceError(RuntimeError):
    pass


def _workspace(args) -> Path:
    ws = Path(args.workdir)
    ws.mkdir(parents=True, exist_ok=True)
    return ws


def _load_corpus(ws: Path) -> Corpus:
    meta_path = ws / META_FILE
    if not meta_path.exists():
        raise WorkspaceError(f"{meta_path} missing; run `trace ingest <manifest>` first")
    meta = json.loads(meta_path.read_text("utf-8"))
    corpus = load_manifest(meta["manifest"])
    if corpus.fingerprint() != meta["fingerprint"]:
        raise WorkspaceError(
            "corpus changed since ingest (fingerprint mismatch); re-run `trace ingest`"
        )
    return corpus


def _load_records(ws: Path) -> list[SnippetRecord]:
    path = ws / RECORDS_FILE
    if not path.exists():
        raise WorkspaceError(f"{path} missing; run `trace extract` first")
    return [
        SnippetRecord.from_json_dict(json.loads(line))
        for line in path.read_text("utf-8").splitlines()
        if line.strip()
    ]


def _load_params(ws: Path) -> MatchParams:
    path = ws / PARAMS_FILE
    if not path.exists():
        return MatchParams()
    d = json.loads(path.read_text("utf-8"))
    return MatchParams(min_len=d["min_len"], min_exact=d["min_exact"])


def _load_review_set(ws: Path) -> ReviewSet:
    path = ws / REVIEW_FILE
    if not path.exists():
        raise WorkspaceError(f"{path} missing; run `trace sample` first")
    return ReviewSet.from_json_dict(json.loads(path.read_text("utf-8")))


# ------------------------------------------------------------- subcommands


def cmd_ingest(args) -> int:
    ws = _workspace(args)
    manifest = Path(args.manifest).resolve()
    corpus = load_manifest(manifest)
    report = corpus.report()
    meta = {
        "manifest": str(manifest),
        "fingerprint": corpus.fingerprint(),
        "documents": report.document_count,
        "dockets": report.docket_count,
    }
    (ws / META_FILE).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", "utf-8")
    for line in report.lines():
        print(line)
    return 0


def cmd_index(args) -> int:
    ws = _workspace(args)
    corpus = _load_corpus(ws)
    index = build_index(corpus)
    index.save(ws / INDEX_FILE)
    print(f"indexed {index.posting_count} postings over {index.gram_count} distinct grams")
    return 0


def cmd_extract(args) -> int:
    ws = _workspace(args)
    corpus = _load_corpus(ws)
    index_path = ws / INDEX_FILE
    if not index_path.exists():
        raise WorkspaceError(f"{index_path} missing; run `trace index` first")
    index = load_index(index_path, corpus)
    params = MatchParams(min_len=args.min_len, min_exact=args.min_exact)
    records = extract_candidates(corpus, index, params)
    with open(ws / RECORDS_FILE, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), sort_keys=True) + "\n")
    (ws / PARAMS_FILE).write_text(
        json.dumps({"min_len": params.min_len, "min_exact": params.min_exact},
                   indent=2, sort_keys=True) + "\n",
        "utf-8",
    )
    survivors = sum(1 for r in records if r.c1 and r.c2 and r.c3)
    candidates = sum(1 for r in records if r.is_candidate)
    print(f"matches: {len(records)} raw, {survivors} pass c1-c3, {candidates} candidates")
    return 0


def cmd_sample(args) -> int:
    ws = _workspace(args)
    records = _load_records(ws)
    review = select_review_set(records, top_k=args.top, random_k=args.rand, seed=args.seed)
    (ws / REVIEW_FILE).write_text(
        json.dumps(review.to_json_dict(), indent=2, sort_keys=True) + "\n", "utf-8"
    )
    print(
        f"review set: {len(review.top_bracket)} top + "
        f"{len(review.random_bracket)} random (seed {review.sampling_seed})"
    )
    return 0


def cmd_report(args) -> int:
    ws = _workspace(args)
    corpus = _load_corpus(ws)
    records = _load_records(ws)
    review = _load_review_set(ws)
    files = export_report(
        records, review, briefs_histogram(corpus), args.out_dir, _load_params(ws)
    )
    for path in files:
        print(path)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .review import LabelStore
    from .service import create_app

    ws = _workspace(args)
    corpus = _load_corpus(ws)
    records = _load_records(ws)
    review = _load_review_set(ws)
    store = LabelStore(ws / LABELS_FILE, review)
    app = create_app(corpus, records, review, store)
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trace",
        description="trace brief language through opinions into later cases",
    )
    parser.add_argument(
        "--workdir", default=".", help="workspace directory (default: current directory)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a manifest and pin the corpus")
    p.add_argument("manifest", help="path to a JSON Lines manifest")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("index", help="build the snippet occurrence index")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("extract", help="match opinions against briefs and flag records")
    p.add_argument("--min-len", type=int, default=10, help="minimum shared words (default 10)")
    p.add_argument("--min-exact", type=float, default=0.8,
                   help="minimum exact-word ratio (default 0.8)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sample", help="pick the review brackets")
    p.add_argument("--top", type=int, default=50, help="top bracket size (default 50)")
    p.add_argument("--rand", type=int, default=50, help="random bracket size (default 50)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("report", help="write the report bundle")
    p.add_argument("out_dir", help="directory for the report files")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the review service")
    p.add_argument("addr", help="listen address, host:port or just a port")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WorkspaceError, CorpusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
