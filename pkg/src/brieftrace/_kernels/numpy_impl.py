"""Pure-numpy kernel implementations.

Reference semantics for the hot loops. The numba twin in numba_impl.py must
produce identical results on identical inputs; tests compare the two.
"""

from __future__ import annotations

import numpy as np

# Row budget for the per-diagonal candidate matrices, keeps peak memory flat.
_CHUNK_CELLS = 4_000_000


def collect_windows(
    codes_a: np.ndarray,
    codes_b: np.ndarray,
    diags: np.ndarray,
    min_len: int,
    allowed: np.ndarray,
    cap: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Find all start-maximal aligned windows on the given diagonals.

    A window (i, j, L) pairs codes_a[i:i+L] with codes_b[j:j+L]; it must
    start and end on positions where the codes agree, be at least min_len
    long, and contain at most allowed[L] disagreeing positions. For every
    qualifying start this yields the longest such window, then drops windows
    whose span is covered by a window starting earlier on the same diagonal.

    Returns (starts_a, starts_b, lengths, total). total counts every emitted
    window even when it exceeds cap; at most cap windows are materialized.
    """
    n_a = codes_a.size
    n_b = codes_b.size
    max_l = allowed.size - 1
    out_i: list[int] = []
    out_j: list[int] = []
    out_l: list[int] = []
    total = 0

    for d in diags:
        d = int(d)
        i0 = max(0, -d)
        j0 = i0 + d
        m = min(n_a - i0, n_b - j0)
        if m < min_len:
            continue
        eq = codes_a[i0 : i0 + m] == codes_b[j0 : j0 + m]
        ones = np.flatnonzero(eq)
        k = ones.size
        if k == 0 or ones[-1] - ones[0] + 1 < min_len:
            continue
        g = ones - np.arange(k, dtype=np.int64)

        found = np.empty(k, dtype=np.int64)
        col_idx = np.arange(k, dtype=np.int64)[None, :]
        rows = max(1, _CHUNK_CELLS // k)
        for u0 in range(0, k, rows):
            u1 = min(k, u0 + rows)
            lengths = ones[None, :] - ones[u0:u1, None] + 1
            ok = lengths >= min_len
            np.clip(lengths, 0, max_l, out=lengths)
            ok &= (g[None, :] - g[u0:u1, None]) <= allowed[lengths]
            found[u0:u1] = np.where(ok, col_idx, -1).max(axis=1)

        best_e = -1
        for u in range(k):
            v = found[u]
            if v < 0:
                continue
            e = int(ones[v])
            if e <= best_e:
                continue
            best_e = e
            total += 1
            if total <= cap:
                out_i.append(i0 + int(ones[u]))
                out_j.append(j0 + int(ones[u]))
                out_l.append(e - int(ones[u]) + 1)

    return (
        np.asarray(out_i, dtype=np.int64),
        np.asarray(out_j, dtype=np.int64),
        np.asarray(out_l, dtype=np.int64),
        total,
    )


def fuzzy_scan(doc_codes: np.ndarray, snip_codes: np.ndarray, required: int) -> np.ndarray:
    """All window starts where doc_codes[p:p+W] matches snip_codes.

    A window qualifies when at least `required` positions agree and both the
    first and last position agree. Returns sorted start positions.
    """
    w = snip_codes.size
    n = doc_codes.size
    if n < w or w == 0:
        return np.empty(0, dtype=np.int64)
    n_win = n - w + 1
    hits: list[np.ndarray] = []
    windows = np.lib.stride_tricks.sliding_window_view(doc_codes, w)
    rows = max(1, _CHUNK_CELLS // w)
    for p0 in range(0, n_win, rows):
        p1 = min(n_win, p0 + rows)
        eq = windows[p0:p1] == snip_codes[None, :]
        ok = eq[:, 0] & eq[:, -1] & (eq.sum(axis=1) >= required)
        hits.append(np.flatnonzero(ok) + p0)
    return np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)
