"""Shared builders for corpus and token-stream test data."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from brieftrace.corpus import Corpus, load_manifest


def write_corpus(root: Path, records: list[dict]) -> Path:
    """Write body files plus a manifest under ``root``; return the manifest path.

    Each record is a plain dict with a ``text`` key holding the document body;
    the body is written to ``<doc_id>.txt`` next to the manifest unless the
    record already carries an explicit ``path``.
    """
    root.mkdir(parents=True, exist_ok=True)
    lines = []
    for rec in records:
        rec = dict(rec)
        text = rec.pop("text", None)
        if "path" not in rec:
            body = root / f"{rec['doc_id']}.txt"
            body.write_text(text or "", encoding="utf-8")
            rec["path"] = body.name
        elif text is not None:
            (root / rec["path"]).write_text(text, encoding="utf-8")
        rec.setdefault("title", rec["doc_id"])
        rec.setdefault("docket_id", None)
        lines.append(json.dumps(rec, sort_keys=True))
    manifest = root / "manifest.jsonl"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def build_corpus(root: Path, records: list[dict]) -> Corpus:
    return load_manifest(write_corpus(root, records))


def doc(doc_id: str, role: str, date: str, text: str, docket: str | None = None) -> dict:
    return {
        "doc_id": doc_id,
        "docket_id": docket,
        "role": role,
        "date": date,
        "title": doc_id.replace("_", " "),
        "text": text,
    }


@pytest.fixture
def make_corpus(tmp_path):
    counter = 0

    def _make(records: list[dict]) -> Corpus:
        nonlocal counter
        counter += 1
        return build_corpus(tmp_path / f"corpus{counter}", records)

    return _make


def distinct_words(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def random_stream(rng: random.Random, n: int, vocab: list[str]) -> list[str]:
    return [rng.choice(vocab) for _ in range(n)]


def plant(stream: list[str], run: list[str], at: int) -> list[str]:
    """Overwrite ``stream`` in place with ``run`` starting at index ``at``."""
    assert 0 <= at <= len(stream) - len(run)
    stream[at : at + len(run)] = run
    return stream


def six_docket_records() -> tuple[list[dict], dict[str, tuple[bool, ...]]]:
    """A corpus of six dockets where exactly one record survives all filters.

    Docket A is clean. B through F each trip exactly one condition: B's
    shared run is too short, C's run comes from the petition rather than an
    amicus brief, D's match is under 80% exact, E's snippet has prior use,
    F's has no later use. Vocabularies are disjoint across dockets so no
    accidental matches appear. Built for a run at min_len=6, min_exact=0.70.
    """

    def run_words(prefix: str, n: int) -> list[str]:
        return [f"{prefix}run{i}" for i in range(n)]

    records: list[dict] = []
    expected: dict[str, tuple[bool, ...]] = {}

    def add_docket(tag, run, source_role, *, prior=False, later=True, source_run=None):
        docket = f"dk-{tag}"
        run_text = " ".join(run)
        records.append(
            doc(
                f"op_{tag}",
                "opinion",
                "2011-06-20",
                f"{tag}fill0 {tag}fill1 {run_text} {tag}fill2 {tag}fill3",
                docket=docket,
            )
        )
        source_text = " ".join(source_run if source_run is not None else run)
        records.append(
            doc(
                f"src_{tag}",
                source_role,
                "2011-01-10",
                f"{tag}garn0 {source_text} {tag}garn1",
                docket=docket,
            )
        )
        if source_role != "amicus":
            # every docket still carries an amicus brief; this one shares nothing
            records.append(
                doc(
                    f"am_{tag}",
                    "amicus",
                    "2011-01-12",
                    f"{tag}noise0 {tag}noise1 {tag}noise2 {tag}noise3",
                    docket=docket,
                )
            )
        if prior:
            records.append(
                doc(f"prior_{tag}", "external_case", "2009-05-05", f"{tag}pre0 {run_text} {tag}pre1")
            )
        if later:
            records.append(
                doc(f"later_{tag}", "external_case", "2012-05-05", f"{tag}post0 {run_text} {tag}post1")
            )

    add_docket("a", run_words("a", 12), "amicus")
    expected["dk-a"] = (True, True, True, True, True)

    add_docket("b", run_words("b", 8), "amicus")
    expected["dk-b"] = (False, True, True, True, True)

    add_docket("c", run_words("c", 12), "petition")
    expected["dk-c"] = (True, False, True, True, True)

    run_d = run_words("d", 13)
    fuzzed_d = list(run_d)
    fuzzed_d[3], fuzzed_d[6], fuzzed_d[9] = "dx0", "dx1", "dx2"  # 10/13 = 0.77
    add_docket("d", run_d, "amicus", source_run=fuzzed_d)
    expected["dk-d"] = (True, True, False, True, True)

    add_docket("e", run_words("e", 12), "amicus", prior=True)
    expected["dk-e"] = (True, True, True, False, True)

    add_docket("f", run_words("f", 12), "amicus", later=False)
    expected["dk-f"] = (True, True, True, True, False)

    return records, expected
