"""Human review of candidates: an append-only label log with a current view.

Every submission is appended to a JSON Lines log and never rewritten; the
current state of a candidate is simply the newest entry per (candidate,
annotator) pair, so replaying the log from the start always reproduces it.

A verdict of ``asp`` asserts all three review criteria at once: the snippet
is substantively interesting, it had no prior precedent, and it did not
originate in the petition-stage papers. Submissions claiming ``asp`` while
any criterion is false are rejected by name. Conflicting verdicts from
different annotators are kept side by side and surfaced in the export, not
resolved automatically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable

from .pipeline import ReviewSet

__all__ = [
    "CRITERIA",
    "VERDICTS",
    "LabelError",
    "LabelStore",
    "ReviewLabel",
    "UnknownCandidateError",
    "export_labels",
    "submit_label",
]

VERDICTS = ("asp", "not_asp", "unsure")

# criterion key -> short phrase used in error messages and exports
CRITERIA = {
    "interesting": "substantively interesting",
    "no_prior_precedent": "no prior precedent",
    "not_petition_origin": "not of petition origin",
}


class LabelError(ValueError):
    """A submission that violates the labeling rules."""


class UnknownCandidateError(KeyError):
    """A label for a candidate id outside the loaded review set."""


@dataclass(frozen=True, slots=True)
class ReviewLabel:
    candidate_id: str
    criterion_interesting: bool
    criterion_no_prior_precedent: bool
    criterion_not_petition_origin: bool
    verdict: str
    notes: str
    annotator: str
    labeled_at: datetime | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise LabelError(f"unknown verdict {self.verdict!r}; expected one of {VERDICTS}")
        if not self.annotator:
            raise LabelError("annotator name must not be empty")

    @property
    def criteria(self) -> dict[str, bool]:
        return {
            "interesting": self.criterion_interesting,
            "no_prior_precedent": self.criterion_no_prior_precedent,
            "not_petition_origin": self.criterion_not_petition_origin,
        }

    def check_consistent(self) -> None:
        if self.verdict != "asp":
            return
        failed = [name for name, value in self.criteria.items() if not value]
        if failed:
            phrases = ", ".join(CRITERIA[name] for name in failed)
            raise LabelError(f"verdict 'asp' requires every criterion; failing: {phrases}")

    def to_json_dict(self) -> dict:
        assert self.labeled_at is not None, "only stored labels are serializable"
        return {
            "candidate_id": self.candidate_id,
            "criteria": self.criteria,
            "verdict": self.verdict,
            "notes": self.notes,
            "annotator": self.annotator,
            "labeled_at": self.labeled_at.isoformat(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> ReviewLabel:
        crit = d["criteria"]
        return cls(
            candidate_id=d["candidate_id"],
            criterion_interesting=bool(crit["interesting"]),
            criterion_no_prior_precedent=bool(crit["no_prior_precedent"]),
            criterion_not_petition_origin=bool(crit["not_petition_origin"]),
            verdict=d["verdict"],
            notes=d.get("notes", ""),
            annotator=d["annotator"],
            labeled_at=datetime.fromisoformat(d["labeled_at"]),
        )


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


class LabelStore:
    """Append-only label log bound to one review set.

    The log file is opened lazily and only ever appended to. ``clock`` is
    injectable for tests; stored timestamps are forced strictly increasing
    per annotator even if the clock stalls.
    """

    def __init__(
        self,
        log_path,
        review_set: ReviewSet | None = None,
        clock: Callable[[], datetime] = _utc_now,
    ) -> None:
        self.log_path = Path(log_path)
        self.review_set = review_set
        self._clock = clock
        self._log: list[ReviewLabel] = []
        self._current: dict[tuple[str, str], ReviewLabel] = {}
        self._last_stamp: dict[str, datetime] = {}
        if self.log_path.exists():
            for lineno, line in enumerate(self.log_path.read_text("utf-8").splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    label = ReviewLabel.from_json_dict(json.loads(line))
                except (KeyError, ValueError) as exc:
                    raise LabelError(f"{self.log_path}: bad log entry at line {lineno}: {exc}")
                self._remember(label)

    def _remember(self, label: ReviewLabel) -> None:
        self._log.append(label)
        self._current[(label.candidate_id, label.annotator)] = label
        prev = self._last_stamp.get(label.annotator)
        if prev is None or label.labeled_at > prev:
            self._last_stamp[label.annotator] = label.labeled_at

    def _known(self, candidate_id: str) -> bool:
        if self.review_set is None:
            return True
        return self.review_set.bracket_of(candidate_id) is not None

    def submit(self, label: ReviewLabel) -> ReviewLabel:
        """Validate, timestamp, append, and return the stored label."""
        if not self._known(label.candidate_id):
            raise UnknownCandidateError(label.candidate_id)
        label.check_consistent()
        stamp = self._clock()
        prev = self._last_stamp.get(label.annotator)
        if prev is not None and stamp <= prev:
            stamp = prev + timedelta(microseconds=1)
        stored = replace(label, labeled_at=stamp)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(stored.to_json_dict(), sort_keys=True) + "\n")
        self._remember(stored)
        return stored

    # ---------------------------------------------------------------- views

    @property
    def log(self) -> tuple[ReviewLabel, ...]:
        return tuple(self._log)

    def current_view(self) -> dict[tuple[str, str], ReviewLabel]:
        return dict(self._current)

    def labels_for(self, candidate_id: str) -> list[ReviewLabel]:
        return sorted(
            (lab for (cid, _), lab in self._current.items() if cid == candidate_id),
            key=lambda lab: lab.annotator,
        )

    def labeled_candidate_ids(self) -> set[str]:
        return {cid for cid, _ in self._current}

    def _bracket_name(self, candidate_id: str) -> str:
        if self.review_set is None:
            return "unranked"
        return self.review_set.bracket_of(candidate_id) or "unranked"

    def tallies(self) -> dict:
        by_verdict: dict[str, int] = {v: 0 for v in VERDICTS}
        asp_by_bracket: dict[str, int] = {"top": 0, "random": 0, "unranked": 0}
        for label in self._current.values():
            by_verdict[label.verdict] += 1
            if label.verdict == "asp":
                asp_by_bracket[self._bracket_name(label.candidate_id)] += 1
        return {"by_verdict": by_verdict, "asp_by_bracket": asp_by_bracket}

    def disagreements(self) -> list[str]:
        verdicts: dict[str, set[str]] = {}
        for (cid, _), label in self._current.items():
            verdicts.setdefault(cid, set()).add(label.verdict)
        return sorted(cid for cid, vs in verdicts.items() if len(vs) > 1)

    def export_payload(self) -> dict:
        labels = sorted(
            self._current.values(), key=lambda lab: (lab.candidate_id, lab.annotator)
        )
        return {
            "labels": [lab.to_json_dict() for lab in labels],
            "tallies": self.tallies(),
            "disagreements": self.disagreements(),
        }

    def export(self, out_path) -> Path:
        out = Path(out_path)
        out.write_text(
            json.dumps(self.export_payload(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        return out

    def import_export(self, export_path) -> int:
        """Append every label from an export file; returns the count added."""
        payload = json.loads(Path(export_path).read_text("utf-8"))
        count = 0
        for entry in payload["labels"]:
            label = ReviewLabel.from_json_dict(entry)
            if not self._known(label.candidate_id):
                raise UnknownCandidateError(label.candidate_id)
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(label.to_json_dict(), sort_keys=True) + "\n")
            self._remember(label)
            count += 1
        return count


def submit_label(store: LabelStore, label: ReviewLabel) -> ReviewLabel:
    return store.submit(label)


def export_labels(store: LabelStore, out_path) -> Path:
    return store.export(out_path)
