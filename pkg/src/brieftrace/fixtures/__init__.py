"""Bundled brief/opinion excerpt pairs used by the tests and the demo docs.

Each fixture is a pair of short text files taken from real filings: an amicus
(or party) brief passage and the passage of the Supreme Court opinion that
echoes it. The files keep the warts of the originals on purpose: OCR noise,
smart quotes, a misspelling ("warratned"), and mojibake byte salad. They give
the normalizer and matcher something honest to chew on.

``florence_freeholders`` is the negative control: the two passages discuss the
same study but share no long word-for-word run.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

__all__ = ["ExcerptPair", "FIXTURE_NAMES", "load_pair"]

FIXTURE_NAMES = (
    "walmart_dukes",
    "caperton_massey",
    "padilla_kentucky",
    "northwest_austin",
    "florence_freeholders",
    "michigan_sheldon",
    "restatement_fraud",
)


@dataclass(frozen=True, slots=True)
class ExcerptPair:
    name: str
    brief_text: str
    opinion_text: str


def load_pair(name: str) -> ExcerptPair:
    """Return the raw (un-normalized) brief and opinion excerpts for ``name``."""
    if name not in FIXTURE_NAMES:
        known = ", ".join(FIXTURE_NAMES)
        raise KeyError(f"unknown fixture {name!r}; known fixtures: {known}")
    data = resources.files(__package__) / "data"
    brief = (data / f"{name}_brief.txt").read_text(encoding="utf-8")
    opinion = (data / f"{name}_opinion.txt").read_text(encoding="utf-8")
    return ExcerptPair(name=name, brief_text=brief, opinion_text=opinion)
