"""End-to-end candidate extraction and reporting.

For every docket the matcher compares the opinion against each sibling brief
(amicus, petition-stage, and merits). Every raw match becomes one record
carrying five boolean conditions:

  c1  the snippet is at least ten words long
  c2  the source document is an amicus brief
  c3  the match is at least 80% exact
  c4  the snippet has no prior use in any court document
  c5  the snippet appears in at least one later court document

A record is a candidate only when all five hold. The length and exactness
floors of c1/c3 are fixed properties of the candidate definition; they do not
follow the matcher parameters of the run, which may be looser so that
near-miss records stay visible.

"Court document" for c4/c5 means opinions and external cases, judged in exact
mode with the opinion date as the cutoff. Same-day occurrences count as
neither prior nor later; they are tallied separately on the record.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import warnings
from dataclasses import dataclass
from pathlib import Path

from .corpus import COURT_ROLES, Corpus, Role
from .matcher import MatchPair, MatchParams, find_matches, required_matches
from .provenance import Snippet, SnippetIndex

__all__ = [
    "CONDITION_MIN_EXACT",
    "CONDITION_MIN_WORDS",
    "BriefsHistogram",
    "ReviewSet",
    "SnippetRecord",
    "briefs_histogram",
    "estimate_total_asp",
    "export_report",
    "extract_candidates",
    "select_review_set",
]

logger = logging.getLogger(__name__)

# Candidate definition floors. Fixed: a record extracted under looser matcher
# parameters is still judged against these.
CONDITION_MIN_WORDS = 10
CONDITION_MIN_EXACT = 0.80

# Brief roles an opinion is compared against; only amicus sources satisfy c2,
# the others exist so reviewers can see where non-amicus language came from.
SOURCE_ROLES = (Role.AMICUS, Role.PETITION, Role.MERITS)


@dataclass(frozen=True, slots=True)
class SnippetRecord:
    """One shared-language match between an opinion and a sibling brief."""

    candidate_id: str
    docket_id: str
    opinion_doc_id: str
    source_doc_id: str
    source_role: Role
    snippet: Snippet
    match: MatchPair
    prior_count: int
    later_count: int
    same_day_count: int
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    c5: bool
    petition_overlap: bool

    @property
    def is_candidate(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4 and self.c5

    @property
    def flags(self) -> tuple[bool, bool, bool, bool, bool]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)

    def to_json_dict(self) -> dict:
        return {
            "candidate_id": self.candidate_id,
            "docket_id": self.docket_id,
            "opinion_doc_id": self.opinion_doc_id,
            "source_doc_id": self.source_doc_id,
            "source_role": self.source_role.value,
            "snippet": self.snippet.canonical_text,
            "opinion_start": self.match.a_start,
            "source_start": self.match.b_start,
            "length": self.match.length,
            "matched_words": self.match.matched_words,
            "exactness": round(self.match.exactness, 6),
            "prior_count": self.prior_count,
            "later_count": self.later_count,
            "same_day_count": self.same_day_count,
            "conditions": {
                "c1": self.c1,
                "c2": self.c2,
                "c3": self.c3,
                "c4": self.c4,
                "c5": self.c5,
            },
            "petition_overlap": self.petition_overlap,
            "is_candidate": self.is_candidate,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> SnippetRecord:
        length = int(d["length"])
        matched = int(d["matched_words"])
        match = MatchPair(
            doc_a=d["opinion_doc_id"],
            doc_b=d["source_doc_id"],
            a_start=int(d["opinion_start"]),
            b_start=int(d["source_start"]),
            length=length,
            matched_words=matched,
            exactness=matched / length,
        )
        cond = d["conditions"]
        return cls(
            candidate_id=d["candidate_id"],
            docket_id=d["docket_id"],
            opinion_doc_id=d["opinion_doc_id"],
            source_doc_id=d["source_doc_id"],
            source_role=Role(d["source_role"]),
            snippet=Snippet(tuple(d["snippet"].split(" "))),
            match=match,
            prior_count=int(d["prior_count"]),
            later_count=int(d["later_count"]),
            same_day_count=int(d["same_day_count"]),
            c1=bool(cond["c1"]),
            c2=bool(cond["c2"]),
            c3=bool(cond["c3"]),
            c4=bool(cond["c4"]),
            c5=bool(cond["c5"]),
            petition_overlap=bool(d["petition_overlap"]),
        )


def _candidate_id(docket: str, opinion: str, source: str, match: MatchPair) -> str:
    key = f"{docket}|{opinion}|{source}|{match.a_start}|{match.b_start}|{match.length}"
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:12]


def extract_candidates(
    corpus: Corpus,
    index: SnippetIndex,
    params: MatchParams | None = None,
) -> list[SnippetRecord]:
    """Match every docket's opinion against its briefs and flag each result.

    Dockets without an opinion are skipped with a logged diagnostic. Records
    come back sorted by (docket, source document, opinion position).
    """
    params = params or MatchParams()
    if index.fingerprint != corpus.fingerprint():
        raise ValueError("index was built from a different corpus")
    if params.min_len < index.k:
        raise ValueError(
            f"min_len {params.min_len} is below the index gram size {index.k}; "
            "prior/later queries would be undefined for the shortest snippets"
        )

    records = []
    for docket_id in corpus.sorted_docket_ids():
        docket = corpus.dockets[docket_id]
        if not docket.opinion_ids:
            logger.warning("docket %s has no opinion; skipped", docket_id)
            continue
        opinion = corpus.documents[docket.opinion_id]
        sources = [
            corpus.documents[doc_id]
            for role_ids in (docket.amicus_ids, docket.petition_ids, docket.merits_ids)
            for doc_id in role_ids
        ]
        for source in sources:
            matches = find_matches(
                opinion.tokens,
                source.tokens,
                params,
                doc_a=opinion.doc_id,
                doc_b=source.doc_id,
            )
            for match in matches:
                snippet = Snippet(
                    opinion.tokens.words[match.a_start : match.a_start + match.length]
                )
                before = index.query_before(snippet, opinion.date, roles=COURT_ROLES)
                after = index.query_after(snippet, opinion.date, roles=COURT_ROLES)
                same_day = {
                    o.doc_id for o in before.same_day if o.doc_id != opinion.doc_id
                }
                petition_ids = set(docket.petition_ids)
                petition_overlap = bool(petition_ids) and any(
                    o.doc_id in petition_ids
                    for o in index.occurrences(
                        snippet,
                        "fuzzy",
                        min_exact=params.min_exact,
                        roles={Role.PETITION},
                    )
                )
                records.append(
                    SnippetRecord(
                        candidate_id=_candidate_id(
                            docket_id, opinion.doc_id, source.doc_id, match
                        ),
                        docket_id=docket_id,
                        opinion_doc_id=opinion.doc_id,
                        source_doc_id=source.doc_id,
                        source_role=source.role,
                        snippet=snippet,
                        match=match,
                        prior_count=before.distinct_count,
                        later_count=after.distinct_count,
                        same_day_count=len(same_day),
                        c1=match.length >= CONDITION_MIN_WORDS,
                        c2=source.role is Role.AMICUS,
                        c3=match.matched_words
                        >= required_matches(match.length, CONDITION_MIN_EXACT),
                        c4=before.distinct_count == 0,
                        c5=after.distinct_count >= 1,
                        petition_overlap=petition_overlap,
                    )
                )
    records.sort(key=lambda r: (r.docket_id, r.source_doc_id, r.match.a_start, r.match.b_start))
    return records


@dataclass(frozen=True, slots=True)
class ReviewSet:
    """Candidate ids picked for human review: a top bracket and a random one."""

    top_bracket: tuple[str, ...]
    random_bracket: tuple[str, ...]
    sampling_seed: int

    def bracket_of(self, candidate_id: str) -> str | None:
        if candidate_id in self.top_bracket:
            return "top"
        if candidate_id in self.random_bracket:
            return "random"
        return None

    def to_json_dict(self) -> dict:
        return {
            "top_bracket": list(self.top_bracket),
            "random_bracket": list(self.random_bracket),
            "sampling_seed": self.sampling_seed,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> ReviewSet:
        return cls(
            top_bracket=tuple(d["top_bracket"]),
            random_bracket=tuple(d["random_bracket"]),
            sampling_seed=int(d["sampling_seed"]),
        )


def select_review_set(
    candidates: list[SnippetRecord],
    top_k: int = 50,
    random_k: int = 50,
    seed: int = 0,
) -> ReviewSet:
    """Pick the heaviest-cited candidates plus a seeded random sample.

    Ordering inside the top bracket is by descending later count, ties broken
    by docket id, then snippet text, then candidate id. The random bracket is
    drawn without replacement from everything left over.
    """
    pool = [r for r in candidates if r.is_candidate]
    ranked = sorted(
        pool,
        key=lambda r: (-r.later_count, r.docket_id, r.snippet.canonical_text, r.candidate_id),
    )
    top = ranked[:top_k]
    rest = sorted((r.candidate_id for r in ranked[top_k:]))
    if len(pool) < top_k + random_k:
        warnings.warn(
            f"only {len(pool)} candidates for a requested {top_k}+{random_k} review set",
            stacklevel=2,
        )
    rng = random.Random(seed)
    drawn = rng.sample(rest, min(random_k, len(rest)))
    return ReviewSet(
        top_bracket=tuple(r.candidate_id for r in top),
        random_bracket=tuple(drawn),
        sampling_seed=seed,
    )


def estimate_total_asp(
    total_candidates: int,
    top_reviewed: int,
    top_asp: int,
    random_reviewed: int,
    random_asp: int,
) -> float:
    """Extrapolate the review-sample ASP rate over the unreviewed remainder.

    The top bracket is exhaustively counted; the random bracket's hit rate is
    projected onto every candidate outside the top bracket.
    """
    if random_reviewed <= 0:
        raise ValueError("cannot estimate from an empty random bracket")
    if min(total_candidates, top_reviewed, top_asp, random_asp) < 0:
        raise ValueError("counts must be non-negative")
    if top_asp > top_reviewed:
        raise ValueError("top_asp exceeds top_reviewed")
    if random_asp > random_reviewed:
        raise ValueError("random_asp exceeds random_reviewed")
    if top_reviewed > total_candidates:
        raise ValueError("top_reviewed exceeds total_candidates")
    return top_asp + (random_asp / random_reviewed) * (total_candidates - top_reviewed)


@dataclass(frozen=True, slots=True)
class BriefsHistogram:
    """Amicus briefs per docket, bucketed by count."""

    buckets: dict[int, int]
    docket_count: int
    brief_count: int
    zero_brief_dockets: int

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.buckets.items())


def briefs_histogram(corpus: Corpus) -> BriefsHistogram:
    buckets: dict[int, int] = {}
    briefs = 0
    zero = 0
    for docket in corpus.dockets.values():
        n = docket.brief_count
        buckets[n] = buckets.get(n, 0) + 1
        briefs += n
        zero += n == 0
    return BriefsHistogram(
        buckets=buckets,
        docket_count=len(corpus.dockets),
        brief_count=briefs,
        zero_brief_dockets=zero,
    )


def _stage_counts(records: list[SnippetRecord]) -> dict:
    surviving_c123 = [r for r in records if r.c1 and r.c2 and r.c3]
    candidates = [r for r in records if r.is_candidate]
    return {
        "raw_matches": len(records),
        "c1_c2_c3_survivors": len(surviving_c123),
        "candidates": len(candidates),
        "distinct_candidate_snippets": len({r.snippet.canonical_text for r in candidates}),
    }


def export_report(
    records: list[SnippetRecord],
    review_set: ReviewSet,
    histogram: BriefsHistogram,
    out_dir,
    params: MatchParams | None = None,
) -> list[Path]:
    """Write the report bundle; identical inputs produce identical bytes.

    Files: candidates.jsonl (candidate records), review_set.json,
    histogram.csv, summary.json (parameters plus per-stage counts).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = params or MatchParams()

    candidates_path = out / "candidates.jsonl"
    with open(candidates_path, "w", encoding="utf-8") as fh:
        for record in records:
            if record.is_candidate:
                fh.write(json.dumps(record.to_json_dict(), sort_keys=True) + "\n")

    review_path = out / "review_set.json"
    review_path.write_text(
        json.dumps(review_set.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    histogram_path = out / "histogram.csv"
    lines = ["amicus_briefs,dockets"]
    lines += [f"{bucket},{count}" for bucket, count in histogram.rows()]
    histogram_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    summary_path = out / "summary.json"
    summary = {
        "parameters": {
            "min_len": params.min_len,
            "min_exact": params.min_exact,
            "condition_min_words": CONDITION_MIN_WORDS,
            "condition_min_exact": CONDITION_MIN_EXACT,
        },
        "stages": _stage_counts(records),
        "review_set": {
            "top": len(review_set.top_bracket),
            "random": len(review_set.random_bracket),
            "sampling_seed": review_set.sampling_seed,
        },
        "corpus": {
            "dockets": histogram.docket_count,
            "amicus_briefs": histogram.brief_count,
            "zero_brief_dockets": histogram.zero_brief_dockets,
        },
    }
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return [candidates_path, review_path, histogram_path, summary_path]
