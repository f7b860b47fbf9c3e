"""Compare the numba and numpy matcher backends on synthetic filings.

Builds token streams with a zipf-shaped vocabulary (legal prose reuses a
small core of words heavily, which is what makes diagonal discovery
expensive) and several planted shared passages, then times find_matches
under each backend. Outputs are checked for equality before any number is
reported.

Run:  python benchmarks/bench_matcher.py
"""

from __future__ import annotations

import random
import statistics
import time

from brieftrace import _kernels
from brieftrace.matcher import MatchParams, find_matches

REPEATS = 5
SIZES = (2_000, 8_000, 20_000)
PARAMS = MatchParams(min_len=10, min_exact=0.80, max_pairs=1_000_000)


def zipf_vocab(rng: random.Random, n_tokens: int, vocab_size: int) -> list[str]:
    words = [f"w{i}" for i in range(vocab_size)]
    weights = [1.0 / (rank + 1) for rank in range(vocab_size)]
    return rng.choices(words, weights=weights, k=n_tokens)


def make_pair(rng: random.Random, size: int) -> tuple[list[str], list[str]]:
    a = zipf_vocab(rng, size, 4_000)
    b = zipf_vocab(rng, size, 4_000)
    for p in range(6):  # planted quotes, two with an interior substitution
        run = [f"quote{p}_{i}" for i in range(rng.randint(12, 30))]
        spot_a = rng.randint(0, size - len(run))
        spot_b = rng.randint(0, size - len(run))
        a[spot_a : spot_a + len(run)] = run
        drifted = list(run)
        if p % 3 == 0:
            drifted[len(run) // 2] = "drift"
        b[spot_b : spot_b + len(run)] = drifted
    return a, b


def bench(backend: str, pairs) -> tuple[float, list]:
    with _kernels.use_backend(backend):
        find_matches(pairs[0][0][:200], pairs[0][1][:200], PARAMS)  # warm-up
        times = []
        outputs = []
        for _ in range(REPEATS):
            start = time.perf_counter()
            out = [find_matches(a, b, PARAMS) for a, b in pairs]
            times.append(time.perf_counter() - start)
            outputs = out
    return statistics.median(times), outputs


def main() -> None:
    rng = random.Random(271828)
    print(f"{'tokens/side':>12}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}  matches")
    for size in SIZES:
        pairs = [make_pair(rng, size) for _ in range(3)]
        t_numba, out_numba = bench("numba", pairs)
        t_numpy, out_numpy = bench("numpy", pairs)
        if out_numba != out_numpy:
            raise SystemExit(f"backend outputs differ at size {size}")
        n_matches = sum(len(ms) for ms in out_numba)
        print(
            f"{size:>12,}  {t_numba:>9.3f}s  {t_numpy:>9.3f}s"
            f"  {t_numpy / t_numba:>7.1f}x  {n_matches}"
        )
    print(f"(median of {REPEATS} runs over 3 pairs per size; equality checked)")


if __name__ == "__main__":
    main()
