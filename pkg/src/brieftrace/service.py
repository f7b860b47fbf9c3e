"""HTTP review service: serves triage cards and accepts labels.

The service holds everything in memory except the label log, which the
LabelStore appends to disk. Cards are pre-sliced: each one carries ±40 words
of context around the match from both the opinion and the source brief, with
character offsets for the shared span, so clients never see whole documents.

Endpoints (JSON bodies, UTF-8):

    GET  /api/candidates?status=&bracket=&page=   paged card listing
    GET  /api/candidates/{id}                     one card with labels
    POST /api/candidates/{id}/label               submit a label
    GET  /api/export                              current labels and tallies
    GET  /api/summary                             progress and tally overview

The annotator name rides in the ``X-Annotator`` header; there is no further
authentication.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, Header, HTTPException, Query

from .corpus import Corpus
from .pipeline import ReviewSet, SnippetRecord
from .review import LabelError, LabelStore, ReviewLabel, UnknownCandidateError

__all__ = ["CONTEXT_WORDS", "PAGE_SIZE", "build_cards", "create_app"]

CONTEXT_WORDS = 40
PAGE_SIZE = 20

_STATUSES = ("all", "labeled", "unlabeled")
_BRACKETS = ("all", "top", "random")


@dataclass(frozen=True, slots=True)
class _Side:
    doc_id: str
    title: str
    date: str
    role: str
    context: str
    highlight_start: int
    highlight_end: int

    def to_json_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title": self.title,
            "date": self.date,
            "role": self.role,
            "context": self.context,
            "highlight": {"start": self.highlight_start, "end": self.highlight_end},
        }


def _slice_context(corpus: Corpus, doc_id: str, start: int, length: int) -> _Side:
    doc = corpus.documents[doc_id]
    tokens = doc.tokens
    lo = max(0, start - CONTEXT_WORDS)
    hi = min(len(tokens.words), start + length + CONTEXT_WORDS)
    ctx_begin = tokens.starts[lo]
    context = doc.text[ctx_begin : tokens.ends[hi - 1]]
    return _Side(
        doc_id=doc_id,
        title=doc.title,
        date=doc.date.isoformat(),
        role=doc.role.value,
        context=context,
        highlight_start=tokens.starts[start] - ctx_begin,
        highlight_end=tokens.ends[start + length - 1] - ctx_begin,
    )


def build_cards(
    corpus: Corpus, records: list[SnippetRecord], review_set: ReviewSet
) -> list[dict]:
    """Cards for every review-set candidate, top bracket first in rank order."""
    by_id = {r.candidate_id: r for r in records}
    cards = []
    for bracket, ids in (("top", review_set.top_bracket), ("random", review_set.random_bracket)):
        for cid in ids:
            record = by_id.get(cid)
            if record is None:
                raise ValueError(f"review set names unknown candidate {cid}")
            m = record.match
            cards.append(
                {
                    "candidate_id": cid,
                    "docket_id": record.docket_id,
                    "bracket": bracket,
                    "snippet": record.snippet.canonical_text,
                    "length": m.length,
                    "exactness": round(m.exactness, 6),
                    "prior_count": record.prior_count,
                    "later_count": record.later_count,
                    "same_day_count": record.same_day_count,
                    "petition_overlap": record.petition_overlap,
                    "conditions": {
                        "c1": record.c1,
                        "c2": record.c2,
                        "c3": record.c3,
                        "c4": record.c4,
                        "c5": record.c5,
                    },
                    "opinion": _slice_context(
                        corpus, record.opinion_doc_id, m.a_start, m.length
                    ).to_json_dict(),
                    "source": _slice_context(
                        corpus, record.source_doc_id, m.b_start, m.length
                    ).to_json_dict(),
                }
            )
    return cards


def create_app(
    corpus: Corpus,
    records: list[SnippetRecord],
    review_set: ReviewSet,
    store: LabelStore,
) -> FastAPI:
    cards = build_cards(corpus, records, review_set)
    by_id = {card["candidate_id"]: card for card in cards}
    app = FastAPI(title="brieftrace review service")

    def with_labels(card: dict) -> dict:
        labels = store.labels_for(card["candidate_id"])
        return {**card, "labels": [label.to_json_dict() for label in labels]}

    def progress() -> dict:
        labeled = {cid for cid in store.labeled_candidate_ids() if cid in by_id}
        return {"labeled": len(labeled), "total": len(cards)}

    @app.get("/api/candidates")
    def list_candidates(
        status: str = Query("all"),
        bracket: str = Query("all"),
        page: int = Query(1),
    ):
        if status not in _STATUSES:
            raise HTTPException(400, f"unknown status {status!r}; expected one of {_STATUSES}")
        if bracket not in _BRACKETS:
            raise HTTPException(400, f"unknown bracket {bracket!r}; expected one of {_BRACKETS}")
        if page < 1:
            raise HTTPException(400, "page starts at 1")
        labeled_ids = store.labeled_candidate_ids()
        selected = []
        for card in cards:
            if bracket != "all" and card["bracket"] != bracket:
                continue
            is_labeled = card["candidate_id"] in labeled_ids
            if status == "labeled" and not is_labeled:
                continue
            if status == "unlabeled" and is_labeled:
                continue
            selected.append(card)
        lo = (page - 1) * PAGE_SIZE
        return {
            "total": len(selected),
            "page": page,
            "page_size": PAGE_SIZE,
            "cards": [with_labels(c) for c in selected[lo : lo + PAGE_SIZE]],
            "progress": progress(),
        }

    @app.get("/api/candidates/{candidate_id}")
    def get_candidate(candidate_id: str):
        card = by_id.get(candidate_id)
        if card is None:
            raise HTTPException(404, f"no candidate {candidate_id!r} in the review set")
        return with_labels(card)

    @app.post("/api/candidates/{candidate_id}/label")
    def post_label(
        candidate_id: str,
        body: dict,
        x_annotator: str = Header("anonymous"),
    ):
        if candidate_id not in by_id:
            raise HTTPException(404, f"no candidate {candidate_id!r} in the review set")
        criteria = body.get("criteria")
        if not isinstance(criteria, dict):
            raise HTTPException(400, "body must carry a 'criteria' object")
        missing = {"interesting", "no_prior_precedent", "not_petition_origin"} - criteria.keys()
        if missing:
            raise HTTPException(400, f"criteria missing: {sorted(missing)}")
        try:
            label = ReviewLabel(
                candidate_id=candidate_id,
                criterion_interesting=bool(criteria["interesting"]),
                criterion_no_prior_precedent=bool(criteria["no_prior_precedent"]),
                criterion_not_petition_origin=bool(criteria["not_petition_origin"]),
                verdict=body.get("verdict", ""),
                notes=str(body.get("notes", "")),
                annotator=x_annotator,
            )
            stored = store.submit(label)
        except LabelError as exc:
            raise HTTPException(400, str(exc))
        except UnknownCandidateError:
            raise HTTPException(404, f"no candidate {candidate_id!r} in the review set")
        return {"label": stored.to_json_dict(), "progress": progress()}

    @app.get("/api/export")
    def get_export():
        return store.export_payload()

    @app.get("/api/summary")
    def get_summary():
        return {
            "progress": progress(),
            "brackets": {
                "top": len(review_set.top_bracket),
                "random": len(review_set.random_bracket),
            },
            "tallies": store.tallies(),
            "log_entries": len(store.log),
        }

    return app
