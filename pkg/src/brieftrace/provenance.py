"""Temporal snippet index: who used a word sequence, where, and when.

The index answers one question shape: given a snippet of normalized words,
list every place it occurs in the corpus, then split those occurrences
around a cutoff date. "Before" and "after" are strict; occurrences dated
exactly on the cutoff land in a separate same-day list so that neither the
prior-use check nor the later-use count silently absorbs them.

Exact mode requires the token run to equal the snippet verbatim. Fuzzy mode
relaxes interior positions to a minimum exactness ratio while keeping both
endpoints exact, mirroring the matcher's window rule. Exact results are a
subset of fuzzy results at any ratio.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from datetime import date as Date
from typing import Iterable, Literal, Sequence

import numpy as np

from . import _kernels
from .corpus import Corpus, Role, normalize_text, tokenize
from .matcher import DEFAULT_SEED_LEN, _gram_hashes, required_matches

__all__ = [
    "IndexFormatError",
    "IndexMismatchError",
    "Occurrence",
    "Snippet",
    "SnippetIndex",
    "TemporalSlice",
    "build_index",
    "load_index",
    "occurrences",
    "query_after",
    "query_before",
]

_MAGIC = b"BTIX"
_VERSION = 1

QueryMode = Literal["exact", "fuzzy"]


class IndexFormatError(ValueError):
    """Raised when an index file is truncated, corrupt, or a foreign format."""


class IndexMismatchError(ValueError):
    """Raised when an index file was built from a different corpus."""


@dataclass(frozen=True, slots=True)
class Snippet:
    """A short run of normalized words in canonical (opinion-side) form."""

    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("snippet must contain at least one word")
        for w in self.words:
            if not w or " " in w:
                raise ValueError(f"malformed snippet word {w!r}")

    @property
    def canonical_text(self) -> str:
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_text(cls, text: str) -> Snippet:
        return cls(tuple(tokenize(normalize_text(text)).words))


@dataclass(frozen=True, slots=True, order=True)
class Occurrence:
    """One appearance of a snippet: document, token offset, and its date."""

    date: Date
    doc_id: str
    token_start: int
    role: Role = field(compare=False)


@dataclass(frozen=True, slots=True)
class TemporalSlice:
    """Occurrences on one side of a cutoff, plus the same-day diagnostics."""

    occurrences: tuple[Occurrence, ...]
    same_day: tuple[Occurrence, ...]

    @property
    def distinct_count(self) -> int:
        return len({o.doc_id for o in self.occurrences})


def _doc_order(corpus: Corpus) -> list[str]:
    return sorted(corpus.documents, key=lambda d: (corpus.documents[d].date, d))


class SnippetIndex:
    """Inverted k-gram index over every document's token stream.

    Construction walks documents in (date, doc_id) order, so two indexes
    built from equal corpora are byte-identical regardless of manifest
    ordering. The bound corpus stays attached for verification: a gram hit
    is only reported after the actual tokens confirm it, so hash collisions
    cannot surface as phantom occurrences.
    """

    def __init__(
        self,
        corpus: Corpus,
        k: int,
        doc_ids: tuple[str, ...],
        hashes: np.ndarray,
        offsets: np.ndarray,
        posting_docs: np.ndarray,
        posting_positions: np.ndarray,
    ) -> None:
        self._corpus = corpus
        self.k = k
        self.fingerprint = corpus.fingerprint()
        self._doc_ids = doc_ids
        self._hashes = hashes
        self._offsets = offsets
        self._posting_docs = posting_docs
        self._posting_positions = posting_positions
        self._vocab: dict[str, int] = {}
        self._doc_codes: list[np.ndarray] = []
        for doc_id in doc_ids:
            words = corpus.documents[doc_id].tokens.words
            codes = np.empty(len(words), dtype=np.int32)
            for i, w in enumerate(words):
                codes[i] = self._vocab.setdefault(w, len(self._vocab))
            self._doc_codes.append(codes)

    @property
    def posting_count(self) -> int:
        return int(self._posting_positions.shape[0])

    @property
    def gram_count(self) -> int:
        return int(self._hashes.shape[0])

    def _encode(self, words: Sequence[str]) -> np.ndarray:
        # unseen words get -1: they can never equal a corpus code
        return np.array([self._vocab.get(w, -1) for w in words], dtype=np.int64)

    def _bucket(self, gram_hash: np.uint64) -> tuple[np.ndarray, np.ndarray]:
        pos = int(np.searchsorted(self._hashes, gram_hash))
        if pos == len(self._hashes) or self._hashes[pos] != gram_hash:
            return np.empty(0, np.uint32), np.empty(0, np.int32)
        lo, hi = int(self._offsets[pos]), int(self._offsets[pos + 1])
        return self._posting_docs[lo:hi], self._posting_positions[lo:hi]

    # ------------------------------------------------------------ queries

    def occurrences(
        self,
        snippet: Snippet,
        mode: QueryMode = "exact",
        *,
        min_exact: float = 0.9,
        roles: Iterable[Role] | None = None,
    ) -> list[Occurrence]:
        n = len(snippet)
        if n < self.k:
            raise ValueError(f"snippet of {n} words is shorter than the index gram size {self.k}")
        if mode not in ("exact", "fuzzy"):
            raise ValueError(f"unknown query mode {mode!r}")
        if mode == "fuzzy" and not 0.0 < min_exact <= 1.0:
            raise ValueError("min_exact must be in (0, 1]")

        codes = self._encode(snippet.words)
        role_set = set(roles) if roles is not None else None
        if codes[0] < 0 or codes[-1] < 0:
            return []  # endpoint word absent from the corpus entirely

        if mode == "exact":
            if (codes < 0).any():
                return []
            found = self._exact_candidates(codes, n)
        else:
            found = self._fuzzy_candidates(codes, n, min_exact)

        out = []
        for doc_idx, start in found:
            doc = self._corpus.documents[self._doc_ids[doc_idx]]
            if role_set is not None and doc.role not in role_set:
                continue
            out.append(Occurrence(doc.date, doc.doc_id, int(start), doc.role))
        out.sort(key=lambda o: (o.date, o.doc_id, o.token_start))
        return out

    def _exact_candidates(self, codes: np.ndarray, n: int) -> list[tuple[int, int]]:
        first = _gram_hashes(codes[: self.k], self.k)[0]
        docs, positions = self._bucket(first)
        found = []
        for doc_idx, pos in zip(docs.tolist(), positions.tolist()):
            doc_codes = self._doc_codes[doc_idx]
            if pos + n <= len(doc_codes) and np.array_equal(doc_codes[pos : pos + n], codes):
                found.append((doc_idx, pos))
        return found

    def _fuzzy_candidates(
        self, codes: np.ndarray, n: int, min_exact: float
    ) -> list[tuple[int, int]]:
        required = required_matches(n, min_exact)
        allowed = n - required
        # mismatches cut the window into at most allowed+1 exact runs, so the
        # longest one spans at least ceil(required / (allowed + 1)) words
        guaranteed_run = -(-required // (allowed + 1))

        if guaranteed_run >= self.k:
            candidates = self._gram_candidates(codes, n)
        else:
            candidates = self._scan_all(codes, required)

        found = []
        for doc_idx, start in candidates:
            window = self._doc_codes[doc_idx][start : start + n]
            if window[0] != codes[0] or window[-1] != codes[-1]:
                continue
            if int(np.count_nonzero(window == codes)) >= required:
                found.append((doc_idx, start))
        return found

    def _gram_candidates(self, codes: np.ndarray, n: int) -> set[tuple[int, int]]:
        snippet_hashes = _gram_hashes(np.maximum(codes, 0), self.k)
        candidates: set[tuple[int, int]] = set()
        for offset in range(n - self.k + 1):
            seg = codes[offset : offset + self.k]
            if (seg < 0).any():
                continue  # gram touches a word the corpus has never seen
            docs, positions = self._bucket(snippet_hashes[offset])
            for doc_idx, pos in zip(docs.tolist(), positions.tolist()):
                start = pos - offset
                if start >= 0 and start + n <= len(self._doc_codes[doc_idx]):
                    candidates.add((doc_idx, start))
        return candidates

    def _scan_all(self, codes: np.ndarray, required: int) -> list[tuple[int, int]]:
        kernels = _kernels.active()
        out = []
        for doc_idx, doc_codes in enumerate(self._doc_codes):
            if len(doc_codes) < len(codes):
                continue
            starts = kernels.fuzzy_scan(
                doc_codes.astype(np.int64), codes.astype(np.int64), required
            )
            out.extend((doc_idx, int(s)) for s in starts)
        return out

    def query_before(
        self,
        snippet: Snippet,
        cutoff: Date,
        mode: QueryMode = "exact",
        *,
        min_exact: float = 0.9,
        roles: Iterable[Role] | None = None,
    ) -> TemporalSlice:
        hits = self.occurrences(snippet, mode, min_exact=min_exact, roles=roles)
        return TemporalSlice(
            occurrences=tuple(o for o in hits if o.date < cutoff),
            same_day=tuple(o for o in hits if o.date == cutoff),
        )

    def query_after(
        self,
        snippet: Snippet,
        cutoff: Date,
        mode: QueryMode = "exact",
        *,
        min_exact: float = 0.9,
        roles: Iterable[Role] | None = None,
    ) -> TemporalSlice:
        hits = self.occurrences(snippet, mode, min_exact=min_exact, roles=roles)
        return TemporalSlice(
            occurrences=tuple(o for o in hits if o.date > cutoff),
            same_day=tuple(o for o in hits if o.date == cutoff),
        )

    # ------------------------------------------------------- persistence

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<HI", _VERSION, self.k))
            fp = self.fingerprint.encode("ascii")
            fh.write(struct.pack("<I", len(fp)))
            fh.write(fp)
            fh.write(struct.pack("<I", len(self._doc_ids)))
            for doc_id in self._doc_ids:
                raw = doc_id.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
            fh.write(struct.pack("<QQ", len(self._hashes), len(self._posting_docs)))
            fh.write(self._hashes.tobytes())
            fh.write(self._offsets.tobytes())
            fh.write(self._posting_docs.tobytes())
            fh.write(self._posting_positions.tobytes())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SnippetIndex):
            return NotImplemented
        return (
            self.k == other.k
            and self.fingerprint == other.fingerprint
            and self._doc_ids == other._doc_ids
            and np.array_equal(self._hashes, other._hashes)
            and np.array_equal(self._offsets, other._offsets)
            and np.array_equal(self._posting_docs, other._posting_docs)
            and np.array_equal(self._posting_positions, other._posting_positions)
        )


def build_index(corpus: Corpus, k: int = DEFAULT_SEED_LEN) -> SnippetIndex:
    """Index every k-gram position of every document in ``corpus``."""
    if k < 1:
        raise ValueError("gram size must be at least 1")
    doc_ids = tuple(_doc_order(corpus))
    vocab: dict[str, int] = {}
    hash_chunks, doc_chunks, pos_chunks = [], [], []
    for doc_idx, doc_id in enumerate(doc_ids):
        words = corpus.documents[doc_id].tokens.words
        codes = np.empty(len(words), dtype=np.int32)
        for i, w in enumerate(words):
            codes[i] = vocab.setdefault(w, len(vocab))
        if len(codes) < k:
            continue
        grams = _gram_hashes(codes, k)
        hash_chunks.append(grams)
        doc_chunks.append(np.full(len(grams), doc_idx, dtype=np.uint32))
        pos_chunks.append(np.arange(len(grams), dtype=np.int32))

    if hash_chunks:
        all_hashes = np.concatenate(hash_chunks)
        all_docs = np.concatenate(doc_chunks)
        all_pos = np.concatenate(pos_chunks)
        order = np.lexsort((all_pos, all_docs, all_hashes))
        all_hashes, all_docs, all_pos = all_hashes[order], all_docs[order], all_pos[order]
        hashes, first = np.unique(all_hashes, return_index=True)
        offsets = np.append(first, len(all_hashes)).astype(np.int64)
    else:
        hashes = np.empty(0, np.uint64)
        offsets = np.zeros(1, np.int64)
        all_docs = np.empty(0, np.uint32)
        all_pos = np.empty(0, np.int32)

    return SnippetIndex(corpus, k, doc_ids, hashes, offsets, all_docs, all_pos)


def load_index(path, corpus: Corpus) -> SnippetIndex:
    """Read an index file and bind it to ``corpus``, verifying provenance."""
    with open(path, "rb") as fh:
        data = fh.read()
    view = memoryview(data)
    if data[:4] != _MAGIC:
        raise IndexFormatError(f"{path}: not a snippet index file")
    pos = 4
    version, k = struct.unpack_from("<HI", view, pos)
    pos += 6
    if version != _VERSION:
        raise IndexFormatError(f"{path}: unsupported index version {version}")
    (fp_len,) = struct.unpack_from("<I", view, pos)
    pos += 4
    fingerprint = bytes(view[pos : pos + fp_len]).decode("ascii")
    pos += fp_len
    if fingerprint != corpus.fingerprint():
        raise IndexMismatchError(
            "index was built from a different corpus "
            f"(stored fingerprint {fingerprint[:12]}…, corpus {corpus.fingerprint()[:12]}…)"
        )
    (n_docs,) = struct.unpack_from("<I", view, pos)
    pos += 4
    doc_ids = []
    for _ in range(n_docs):
        (length,) = struct.unpack_from("<I", view, pos)
        pos += 4
        doc_ids.append(bytes(view[pos : pos + length]).decode("utf-8"))
        pos += length
    n_hashes, n_postings = struct.unpack_from("<QQ", view, pos)
    pos += 16

    def take(dtype, count):
        nonlocal pos
        arr = np.frombuffer(view, dtype=dtype, count=count, offset=pos)
        pos += arr.nbytes
        return arr.copy()

    try:
        hashes = take(np.uint64, n_hashes)
        offsets = take(np.int64, n_hashes + 1)
        posting_docs = take(np.uint32, n_postings)
        posting_positions = take(np.int32, n_postings)
    except ValueError as exc:
        raise IndexFormatError(f"{path}: truncated index file") from exc
    if pos != len(data):
        raise IndexFormatError(f"{path}: trailing bytes after index payload")
    expected_order = tuple(_doc_order(corpus))
    if tuple(doc_ids) != expected_order:
        raise IndexMismatchError("index document table does not match the corpus")
    return SnippetIndex(corpus, k, expected_order, hashes, offsets, posting_docs, posting_positions)


# Module-level forms of the query operations; thin wrappers over the methods.


def occurrences(
    index: SnippetIndex,
    snippet: Snippet,
    mode: QueryMode = "exact",
    *,
    min_exact: float = 0.9,
    roles: Iterable[Role] | None = None,
) -> list[Occurrence]:
    return index.occurrences(snippet, mode, min_exact=min_exact, roles=roles)


def query_before(
    index: SnippetIndex,
    snippet: Snippet,
    cutoff: Date,
    mode: QueryMode = "exact",
    *,
    min_exact: float = 0.9,
    roles: Iterable[Role] | None = None,
) -> TemporalSlice:
    return index.query_before(snippet, cutoff, mode, min_exact=min_exact, roles=roles)


def query_after(
    index: SnippetIndex,
    snippet: Snippet,
    cutoff: Date,
    mode: QueryMode = "exact",
    *,
    min_exact: float = 0.9,
    roles: Iterable[Role] | None = None,
) -> TemporalSlice:
    return index.query_after(snippet, cutoff, mode, min_exact=min_exact, roles=roles)
