"""Aligned shared-language detection between two token streams.

A match pairs two equal-length word spans position by position. Words may
disagree at interior positions (substitutions) as long as the share of
agreeing positions stays at or above min_exact; the first and last aligned
pair must agree exactly, so matches never carry ragged edges. Only maximal
matches are reported: nothing extendable on its diagonal, nothing whose
spans sit wholly inside another reported match.

find_matches discovers candidate diagonals through hashed word k-grams and
then computes the maximal windows on each diagonal exactly.
brute_force_matches is the independent oracle: a direct enumeration of all
qualifying spans, kept deliberately simple and capped at small inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .corpus import TokenStream

DEFAULT_MIN_LEN = 10
DEFAULT_MIN_EXACT = 0.80
DEFAULT_SEED_LEN = 4
DEFAULT_MAX_PAIRS = 10_000

# Oracle inputs stay small; its cost is quadratic by design.
ORACLE_MAX_TOKENS = 1_000

# Rolling-hash multiplier for word k-grams (FNV-1a prime, wraps in uint64).
_HASH_PRIME = np.uint64(1099511628211)

# Threshold comparisons use a tiny slack so that e.g. 0.8 * 10 counts as
# exactly 8 required words despite binary float representation.
_CEIL_EPS = 1e-9


class TooManyMatchesError(RuntimeError):
    """Match count for one document pair exceeded the configured cap."""

    def __init__(self, doc_a: str, doc_b: str, count: int, cap: int) -> None:
        super().__init__(
            f"match cap exceeded for ({doc_a}, {doc_b}): {count} maximal windows, cap {cap}; "
            "raise max_pairs or tighten parameters"
        )
        self.doc_a = doc_a
        self.doc_b = doc_b
        self.count = count
        self.cap = cap


@dataclass(frozen=True, slots=True)
class MatchParams:
    """Matcher thresholds.

    min_len: shortest reportable window, in words.
    min_exact: minimum share of exactly agreeing positions in a window.
    seed_len: word k-gram size used for candidate discovery (upper bound;
        discovery shortens it when min_exact/min_len make shorter exact runs
        possible inside a qualifying window).
    max_pairs: guard against repeated-phrase blowup; exceeding it raises
        TooManyMatchesError rather than silently truncating.
    """

    min_len: int = DEFAULT_MIN_LEN
    min_exact: float = DEFAULT_MIN_EXACT
    seed_len: int = DEFAULT_SEED_LEN
    max_pairs: int = DEFAULT_MAX_PAIRS

    def __post_init__(self) -> None:
        if not 1 <= self.seed_len <= self.min_len:
            raise ValueError("need 1 <= seed_len <= min_len")
        if not 0.0 < self.min_exact <= 1.0:
            raise ValueError("min_exact must be in (0, 1]")
        if self.max_pairs < 1:
            raise ValueError("max_pairs must be positive")


@dataclass(frozen=True, slots=True)
class MatchPair:
    """One aligned shared-language span between two documents."""

    doc_a: str
    doc_b: str
    a_start: int
    b_start: int
    length: int
    matched_words: int
    exactness: float

    def __post_init__(self) -> None:
        if self.length < 1 or self.a_start < 0 or self.b_start < 0:
            raise ValueError("bad span")
        if not 1 <= self.matched_words <= self.length:
            raise ValueError("matched_words out of range")
        if not 0.0 < self.exactness <= 1.0:
            raise ValueError("exactness out of range")

    @property
    def span_a(self) -> tuple[int, int]:
        return (self.a_start, self.length)

    @property
    def span_b(self) -> tuple[int, int]:
        return (self.b_start, self.length)


def required_matches(length: int, min_exact: float) -> int:
    """Fewest agreeing positions a window of `length` needs."""
    return min(length, max(1, math.ceil(length * min_exact - _CEIL_EPS)))


def _allowed_table(max_len: int, min_exact: float) -> np.ndarray:
    """allowed[L] = most disagreeing positions a valid window of length L may hold."""
    lengths = np.arange(max_len + 1, dtype=np.int64)
    req = np.ceil(lengths * min_exact - _CEIL_EPS).astype(np.int64)
    np.clip(req, 1, lengths, out=req)
    req[0] = 0
    return (lengths - req).astype(np.int32)


def _stream_words(stream: TokenStream | Sequence[str]) -> tuple[str, ...]:
    if isinstance(stream, TokenStream):
        return stream.words
    return tuple(stream)


def _encode_pair(words_a: tuple[str, ...], words_b: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    table: dict[str, int] = {}
    codes = []
    for words in (words_a, words_b):
        arr = np.empty(len(words), dtype=np.int32)
        for idx, word in enumerate(words):
            code = table.setdefault(word, len(table))
            arr[idx] = code
        codes.append(arr)
    return codes[0], codes[1]


def _discovery_gram_len(params: MatchParams, allowed: np.ndarray, max_len: int) -> int:
    """Longest k-gram guaranteed to occur inside every qualifying window.

    A window of length L holds at least req(L) agreeing positions broken
    into at most allowed(L)+1 runs, so its longest exact run has at least
    ceil(req/(allowed+1)) words. Seeding with more than the minimum of that
    bound over the admissible lengths could miss sparse windows.
    """
    lengths = np.arange(params.min_len, max_len + 1, dtype=np.int64)
    if lengths.size == 0:
        return 1
    req = lengths - allowed[params.min_len : max_len + 1]
    run_bound = -(-req // (allowed[params.min_len : max_len + 1] + 1))
    return max(1, min(params.seed_len, int(run_bound.min())))


def _gram_hashes(codes: np.ndarray, k: int) -> np.ndarray:
    n = codes.size - k + 1
    hashes = np.zeros(n, dtype=np.uint64)
    for t in range(k):
        hashes *= _HASH_PRIME
        hashes += codes[t : t + n].astype(np.uint64)
    return hashes


def _candidate_diagonals(codes_a: np.ndarray, codes_b: np.ndarray, k: int, min_len: int) -> np.ndarray:
    """Diagonals (j - i) sharing at least one word k-gram.

    When the k-gram join would blow up (heavily repetitive streams), fall
    back to scanning every diagonal instead; that is a superset, so nothing
    is lost, and it is cheaper than materializing the join.
    """
    n_a = codes_a.size
    n_b = codes_b.size
    all_diags = np.arange(-(n_a - min_len), n_b - min_len + 1, dtype=np.int64)

    ha = _gram_hashes(codes_a, k)
    hb = _gram_hashes(codes_b, k)
    order = np.argsort(hb, kind="stable")
    hb_sorted = hb[order]
    left = np.searchsorted(hb_sorted, ha, side="left")
    right = np.searchsorted(hb_sorted, ha, side="right")
    counts = right - left
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    if total > max(1_000_000, 16 * (n_a + n_b)):
        return all_diags

    starts_a = np.repeat(np.arange(ha.size, dtype=np.int64), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    flat = np.arange(total, dtype=np.int64) - np.repeat(offsets[:-1], counts) + np.repeat(left, counts)
    starts_b = order[flat]
    return np.unique(starts_b - starts_a)


def _suppress_contained(ii: np.ndarray, jj: np.ndarray, ll: np.ndarray) -> np.ndarray:
    """Mask out windows whose spans both lie inside another window's spans."""
    m = ii.size
    keep = np.ones(m, dtype=bool)
    if m < 2:
        return keep
    ei = ii + ll
    ej = jj + ll
    rows = max(1, 2_000_000 // m)
    idx = np.arange(m)
    for p0 in range(0, m, rows):
        p1 = min(m, p0 + rows)
        dom = (
            (ii[None, :] <= ii[p0:p1, None])
            & (jj[None, :] <= jj[p0:p1, None])
            & (ei[None, :] >= ei[p0:p1, None])
            & (ej[None, :] >= ej[p0:p1, None])
        )
        dom[idx[p0:p1] - p0, idx[p0:p1]] = False
        keep[p0:p1] = ~dom.any(axis=1)
    return keep


def find_matches(
    a: TokenStream | Sequence[str],
    b: TokenStream | Sequence[str],
    params: MatchParams | None = None,
    *,
    doc_a: str = "a",
    doc_b: str = "b",
) -> list[MatchPair]:
    """All maximal aligned matches between streams a and b.

    Output is sorted by (a_start, b_start). Swapping the streams mirrors
    every span. Raises TooManyMatchesError when one pair of documents would
    produce more than params.max_pairs windows.
    """
    params = params or MatchParams()
    words_a = _stream_words(a)
    words_b = _stream_words(b)
    max_len = min(len(words_a), len(words_b))
    if max_len < params.min_len:
        return []

    codes_a, codes_b = _encode_pair(words_a, words_b)
    allowed = _allowed_table(max_len, params.min_exact)
    k = _discovery_gram_len(params, allowed, max_len)
    diags = _candidate_diagonals(codes_a, codes_b, k, params.min_len)
    if diags.size == 0:
        return []

    kernel = _kernels.active()
    ii, jj, ll, total = kernel.collect_windows(
        codes_a, codes_b, diags, params.min_len, allowed, params.max_pairs
    )
    if total > params.max_pairs:
        raise TooManyMatchesError(doc_a, doc_b, total, params.max_pairs)

    keep = _suppress_contained(ii, jj, ll)
    ii, jj, ll = ii[keep], jj[keep], ll[keep]
    order = np.lexsort((jj, ii))

    pairs = []
    for idx in order:
        i, j, length = int(ii[idx]), int(jj[idx]), int(ll[idx])
        matched = int(np.count_nonzero(codes_a[i : i + length] == codes_b[j : j + length]))
        pairs.append(
            MatchPair(
                doc_a=doc_a,
                doc_b=doc_b,
                a_start=i,
                b_start=j,
                length=length,
                matched_words=matched,
                exactness=matched / length,
            )
        )
    return pairs


def brute_force_matches(
    a: TokenStream | Sequence[str],
    b: TokenStream | Sequence[str],
    params: MatchParams | None = None,
    *,
    doc_a: str = "a",
    doc_b: str = "b",
) -> list[MatchPair]:
    """Oracle: enumerate every qualifying span pair directly.

    Same output contract as find_matches. Refuses streams longer than
    ORACLE_MAX_TOKENS because the enumeration is quadratic.
    """
    params = params or MatchParams()
    words_a = _stream_words(a)
    words_b = _stream_words(b)
    n_a, n_b = len(words_a), len(words_b)
    if max(n_a, n_b) > ORACLE_MAX_TOKENS:
        raise ValueError(f"oracle refuses streams longer than {ORACLE_MAX_TOKENS} tokens")
    if min(n_a, n_b) < params.min_len:
        return []

    req = [required_matches(length, params.min_exact) for length in range(min(n_a, n_b) + 1)]

    # Longest qualifying window per start position.
    per_start: list[tuple[int, int, int]] = []
    for i in range(n_a):
        word = words_a[i]
        for j in range(n_b):
            if words_b[j] != word:
                continue
            agree = 0
            best_len = 0
            for length in range(1, min(n_a - i, n_b - j) + 1):
                if words_a[i + length - 1] == words_b[j + length - 1]:
                    agree += 1
                    if length >= params.min_len and agree >= req[length]:
                        best_len = length
            if best_len:
                per_start.append((i, j, best_len))

    # On each diagonal keep starts whose window end strictly grows; anything
    # else is contained in an earlier window.
    by_diag: dict[int, list[tuple[int, int, int]]] = {}
    for i, j, length in per_start:
        by_diag.setdefault(j - i, []).append((i, j, length))
    maximal: list[tuple[int, int, int]] = []
    for group in by_diag.values():
        group.sort()
        best_end = -1
        for i, j, length in group:
            end = i + length
            if end > best_end:
                best_end = end
                maximal.append((i, j, length))

    # Cross-diagonal containment.
    survivors = []
    for p, (i, j, length) in enumerate(maximal):
        contained = False
        for q, (i2, j2, length2) in enumerate(maximal):
            if p == q:
                continue
            if i2 <= i and j2 <= j and i2 + length2 >= i + length and j2 + length2 >= j + length:
                contained = True
                break
        if not contained:
            survivors.append((i, j, length))

    survivors.sort()
    pairs = []
    for i, j, length in survivors:
        matched = sum(1 for t in range(length) if words_a[i + t] == words_b[j + t])
        pairs.append(
            MatchPair(
                doc_a=doc_a,
                doc_b=doc_b,
                a_start=i,
                b_start=j,
                length=length,
                matched_words=matched,
                exactness=matched / length,
            )
        )
    return pairs
