"""numba-compiled kernel implementations.

Same contract as numpy_impl; see the docstrings there. Compiled lazily on
first call, cached on disk by numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _collect(codes_a, codes_b, diags, min_len, allowed, cap, out_i, out_j, out_l):  # pragma: no cover
    n_a = codes_a.size
    n_b = codes_b.size
    max_m = min(n_a, n_b)
    ones = np.empty(max_m, dtype=np.int64)
    g = np.empty(max_m, dtype=np.int64)
    total = 0

    for di in range(diags.size):
        d = diags[di]
        i0 = -d if d < 0 else 0
        j0 = i0 + d
        m = n_a - i0
        if n_b - j0 < m:
            m = n_b - j0
        if m < min_len:
            continue

        k = 0
        for t in range(m):
            if codes_a[i0 + t] == codes_b[j0 + t]:
                ones[k] = t
                g[k] = t - k
                k += 1
        if k == 0 or ones[k - 1] - ones[0] + 1 < min_len:
            continue

        best_e = -1
        for u in range(k):
            lmax = ones[k - 1] - ones[u] + 1
            if lmax < min_len:
                break
            budget = g[u] + allowed[lmax]
            # largest v with g[v] <= budget; g is nondecreasing and g[u] <= budget
            lo = u
            hi = k - 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if g[mid] <= budget:
                    lo = mid
                else:
                    hi = mid - 1
            found = -1
            length = 0
            v = lo
            while v >= u:
                length = ones[v] - ones[u] + 1
                if length < min_len:
                    break
                if g[v] - g[u] <= allowed[length]:
                    found = v
                    break
                v -= 1
            if found < 0:
                continue
            e = ones[found]
            if e <= best_e:
                continue
            best_e = e
            total += 1
            if total <= cap:
                out_i[total - 1] = i0 + ones[u]
                out_j[total - 1] = j0 + ones[u]
                out_l[total - 1] = e - ones[u] + 1
    return total


def collect_windows(codes_a, codes_b, diags, min_len, allowed, cap):
    out_i = np.empty(cap, dtype=np.int64)
    out_j = np.empty(cap, dtype=np.int64)
    out_l = np.empty(cap, dtype=np.int64)
    total = _collect(
        codes_a, codes_b, diags, np.int64(min_len), allowed, np.int64(cap), out_i, out_j, out_l
    )
    stored = min(total, cap)
    return out_i[:stored].copy(), out_j[:stored].copy(), out_l[:stored].copy(), int(total)


@njit(cache=True)
def _fuzzy(doc_codes, snip_codes, required, out):  # pragma: no cover
    w = snip_codes.size
    n = doc_codes.size
    count = 0
    for p in range(n - w + 1):
        if doc_codes[p] != snip_codes[0]:
            continue
        if doc_codes[p + w - 1] != snip_codes[w - 1]:
            continue
        hits = 0
        for t in range(w):
            if doc_codes[p + t] == snip_codes[t]:
                hits += 1
        if hits >= required:
            out[count] = p
            count += 1
    return count


def fuzzy_scan(doc_codes, snip_codes, required):
    w = snip_codes.size
    n = doc_codes.size
    if n < w or w == 0:
        return np.empty(0, dtype=np.int64)
    out = np.empty(n - w + 1, dtype=np.int64)
    count = _fuzzy(doc_codes, snip_codes, np.int64(required), out)
    return out[:count].copy()


def warm_up() -> None:
    """Force JIT compilation so later calls run at steady-state speed."""
    codes = np.arange(12, dtype=np.int32)
    allowed = np.zeros(13, dtype=np.int32)
    collect_windows(codes, codes.copy(), np.zeros(1, dtype=np.int64), 4, allowed, 16)
    fuzzy_scan(codes, codes[:4].copy(), 4)
