import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brieftrace._kernels import backend_name, use_backend
from brieftrace.corpus import normalize_text, tokenize
from brieftrace.fixtures import FIXTURE_NAMES, load_pair
from brieftrace.matcher import (
    MatchParams,
    TooManyMatchesError,
    brute_force_matches,
    find_matches,
    required_matches,
)
from conftest import distinct_words, plant, random_stream


def keys(matches):
    return [(m.a_start, m.b_start, m.length, m.matched_words) for m in matches]


def assert_same(a, b, params=None, **kw):
    got = find_matches(a, b, params, **kw)
    ref = brute_force_matches(a, b, params, **kw)
    assert keys(got) == keys(ref)
    return got


# ------------------------------------------------------------- req arithmetic


def test_required_matches_table():
    assert required_matches(10, 0.80) == 8
    assert required_matches(10, 0.70) == 7
    assert required_matches(7, 0.80) == 6
    assert required_matches(20, 0.80) == 16
    assert required_matches(12, 1.0) == 12
    assert required_matches(1, 0.80) == 1
    # 0.8 * 15 is 12.000000000000002 in floats; must not round up to 13
    assert required_matches(15, 0.80) == 12


# ------------------------------------------------------------------ basics


def test_identical_streams_yield_one_full_match():
    words = distinct_words("w", 10)
    got = assert_same(words, list(words))
    assert len(got) == 1
    m = got[0]
    assert (m.a_start, m.b_start, m.length) == (0, 0, 10)
    assert m.matched_words == 10
    assert m.exactness == 1.0
    assert m.span_a == (0, 10)


def test_streams_shorter_than_min_len_yield_nothing():
    words = distinct_words("w", 9)
    assert find_matches(words, list(words)) == []


def test_disjoint_vocabularies_yield_nothing():
    assert assert_same(distinct_words("a", 40), distinct_words("b", 40)) == []


def test_two_substitutions_in_ten_accepted_three_rejected():
    base = distinct_words("w", 10)
    two_subs = list(base)
    two_subs[3], two_subs[6] = "x3", "x6"
    got = assert_same(base, two_subs)
    assert keys(got) == [(0, 0, 10, 8)]

    three_subs = list(two_subs)
    three_subs[5] = "x5"
    assert assert_same(base, three_subs) == []
    # the same window passes once the floor drops to 70%
    loose = MatchParams(min_len=10, min_exact=0.70)
    assert keys(assert_same(base, three_subs, loose)) == [(0, 0, 10, 7)]


def test_endpoints_must_match_exactly():
    # 2 mismatches are within budget, but one sits on the last position
    base = distinct_words("w", 10)
    other = list(base)
    other[9] = "x9"
    assert assert_same(base, other) == []


def test_interior_exact_run_of_three_is_still_found():
    # agreement pattern 1110111011 : 8/10 with no exact 4-gram anywhere,
    # so discovery must probe below the default seed length
    base = distinct_words("w", 10)
    other = list(base)
    other[3], other[7] = "x3", "x7"
    got = assert_same(base, other)
    assert keys(got) == [(0, 0, 10, 8)]


def test_planted_run_in_noise_is_located_exactly():
    rng = random.Random(402)
    run = distinct_words("shared", 12)
    a = plant(random_stream(rng, 80, distinct_words("na", 500)), run, 17)
    b = plant(random_stream(rng, 90, distinct_words("nb", 500)), run, 61)
    got = assert_same(a, b)
    assert keys(got) == [(17, 61, 12, 12)]


def test_repeated_run_reports_all_placements():
    run = distinct_words("s", 10)
    filler = distinct_words("f", 30)
    a = filler[:5] + run + filler[5:10]
    b = filler[10:15] + run + filler[15:20] + run + filler[20:25]
    got = assert_same(a, b)
    assert keys(got) == [(5, 5, 10, 10), (5, 20, 10, 10)]


def test_token_stream_and_word_list_inputs_agree():
    text = "the quick brown fox jumps over the lazy dog again and again"
    stream = tokenize(text)
    assert keys(find_matches(stream, stream)) == keys(
        find_matches(list(stream.words), list(stream.words))
    )


def test_match_pair_carries_doc_ids():
    words = distinct_words("w", 10)
    m = find_matches(words, words, doc_a="brief7", doc_b="op7")[0]
    assert (m.doc_a, m.doc_b) == ("brief7", "op7")


# ------------------------------------------------------------------ guards


def test_pathological_repetition_trips_the_cap():
    a = ["pat", "tern"] * 120
    params = MatchParams(max_pairs=50)
    with pytest.raises(TooManyMatchesError) as exc:
        find_matches(a, list(a), params, doc_a="x", doc_b="y")
    assert exc.value.count > 50
    assert "x" in str(exc.value) and "y" in str(exc.value)


def test_oracle_refuses_oversized_streams():
    big = distinct_words("w", 1001)
    with pytest.raises(ValueError, match="1000"):
        brute_force_matches(big, big)


def test_param_validation():
    with pytest.raises(ValueError):
        MatchParams(min_len=3, seed_len=4)
    with pytest.raises(ValueError):
        MatchParams(min_exact=0.0)
    with pytest.raises(ValueError):
        MatchParams(min_exact=1.2)


# -------------------------------------------------------------- properties


def test_symmetry_swaps_spans():
    rng = random.Random(7)
    vocab = distinct_words("v", 12)
    a = random_stream(rng, 120, vocab)
    b = random_stream(rng, 140, vocab)
    fwd = find_matches(a, b)
    rev = find_matches(b, a)
    assert sorted((m.a_start, m.b_start, m.length) for m in fwd) == sorted(
        (m.b_start, m.a_start, m.length) for m in rev
    )


def test_stricter_params_only_shrink_results():
    rng = random.Random(11)
    vocab = distinct_words("v", 9)
    loose = MatchParams(min_len=8, min_exact=0.75)
    tight = MatchParams(min_len=10, min_exact=0.85)
    for _ in range(20):
        a = random_stream(rng, 90, vocab)
        b = random_stream(rng, 90, vocab)
        wide = find_matches(a, b, loose)
        narrow = find_matches(a, b, tight)
        for m in narrow:
            assert any(
                w.a_start <= m.a_start
                and w.a_start + w.length >= m.a_start + m.length
                and w.b_start <= m.b_start
                and w.b_start + w.length >= m.b_start + m.length
                for w in wide
            ), f"strict match {m} has no loose cover"


def test_no_reported_pair_contains_another():
    rng = random.Random(13)
    vocab = distinct_words("v", 8)
    for _ in range(15):
        a = random_stream(rng, 100, vocab)
        b = random_stream(rng, 100, vocab)
        ms = find_matches(a, b, MatchParams(min_len=8, min_exact=0.75))
        spans = [(m.a_start, m.a_start + m.length, m.b_start, m.b_start + m.length) for m in ms]
        for i, p in enumerate(spans):
            for j, q in enumerate(spans):
                if i != j:
                    contained = q[0] <= p[0] and p[1] <= q[1] and q[2] <= p[2] and p[3] <= q[3]
                    assert not contained, f"{p} inside {q}"


def test_exactness_floor_holds_on_every_output():
    rng = random.Random(17)
    vocab = distinct_words("v", 10)
    params = MatchParams(min_len=9, min_exact=0.78)
    for _ in range(15):
        a = random_stream(rng, 110, vocab)
        b = random_stream(rng, 110, vocab)
        for m in find_matches(a, b, params):
            assert m.length >= 9
            assert m.matched_words >= required_matches(m.length, 0.78)
            assert a[m.a_start] == b[m.b_start]
            assert a[m.a_start + m.length - 1] == b[m.b_start + m.length - 1]


@st.composite
def stream_pairs(draw):
    vocab_n = draw(st.integers(min_value=3, max_value=10))
    vocab = distinct_words("v", vocab_n)
    n_a = draw(st.integers(min_value=0, max_value=60))
    n_b = draw(st.integers(min_value=0, max_value=60))
    a = draw(st.lists(st.sampled_from(vocab), min_size=n_a, max_size=n_a))
    b = draw(st.lists(st.sampled_from(vocab), min_size=n_b, max_size=n_b))
    return a, b


@given(stream_pairs())
@settings(max_examples=150, deadline=None)
def test_matches_oracle_on_small_noisy_streams(pair):
    a, b = pair
    params = MatchParams(min_len=6, min_exact=0.7, seed_len=4, max_pairs=100_000)
    assert keys(find_matches(a, b, params)) == keys(brute_force_matches(a, b, params))


def test_matches_oracle_on_planted_and_adversarial_streams():
    rng = random.Random(4051)
    vocab = distinct_words("v", 40)
    run = distinct_words("r", 14)
    cases = []
    for _ in range(25):
        a = random_stream(rng, rng.randint(30, 250), vocab)
        b = random_stream(rng, rng.randint(30, 250), vocab)
        if len(a) > 20 and len(b) > 20:
            plant(a, run, rng.randint(0, len(a) - len(run)))
            plant(b, run, rng.randint(0, len(b) - len(run)))
        cases.append((a, b))
    # adversarial repeats: tiny vocabulary, heavy phrase reuse
    for _ in range(10):
        phrase = random_stream(rng, 6, distinct_words("p", 4))
        a = (phrase * 12)[: rng.randint(40, 70)]
        b = (phrase * 12)[: rng.randint(40, 70)]
        cases.append((a, b))
    params = MatchParams(max_pairs=500_000)
    for a, b in cases:
        assert keys(find_matches(a, b, params)) == keys(brute_force_matches(a, b, params))


# ---------------------------------------------------------------- backends


def test_numpy_and_jit_backends_agree():
    pytest.importorskip("numba")
    rng = random.Random(99)
    vocab = distinct_words("v", 10)
    pairs = [
        (random_stream(rng, 150, vocab), random_stream(rng, 150, vocab)) for _ in range(10)
    ]
    for a, b in pairs:
        with use_backend("numpy"):
            assert backend_name() == "numpy"
            plain = find_matches(a, b)
        with use_backend("numba"):
            assert backend_name() == "numba"
            jitted = find_matches(a, b)
        assert keys(plain) == keys(jitted)


# ---------------------------------------------------------------- fixtures

# frozen expected (a_start, b_start, length, matched_words) per bundled pair
EXPECTED = {
    "walmart_dukes": [(0, 0, 45, 39)],
    "caperton_massey": [(9, 23, 12, 12)],
    "padilla_kentucky": [(20, 29, 24, 20)],
    "northwest_austin": [(32, 77, 13, 13)],
    "florence_freeholders": [],
    "michigan_sheldon": [(14, 17, 33, 32)],
    "restatement_fraud": [(13, 15, 16, 14)],
}

CORE_RUNS = {
    "walmart_dukes": "notion that the conduct is such that it can be enjoined or declared "
    "unlawful only as to all of the class members or as to none of them",
    "caperton_massey": "public confidence in the fairness and integrity of the nation's elected judges",
    "padilla_kentucky": "counsel is not constitutionally required to provide advice on matters "
    "that will not be decided in the criminal case",
    "michigan_sheldon": "grants to the citizen the right to keep and bear arms",
    "restatement_fraud": "defrauds another for the purpose of causing pecuniary harm to a third person",
}


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_bundled_pairs_match_frozen_expectations(name):
    pair = load_pair(name)
    a = tokenize(normalize_text(pair.brief_text))
    b = tokenize(normalize_text(pair.opinion_text))
    got = assert_same(a, b, doc_a="brief", doc_b="opinion")
    assert keys(got) == EXPECTED[name]
    if name in CORE_RUNS:
        covered = " ".join(a.words[got[0].a_start : got[0].a_start + got[0].length])
        assert CORE_RUNS[name] in covered


def test_bundled_pair_offsets_recover_source_text():
    pair = load_pair("caperton_massey")
    brief = normalize_text(pair.brief_text)
    opinion = normalize_text(pair.opinion_text)
    a, b = tokenize(brief), tokenize(opinion)
    m = find_matches(a, b)[0]
    a_text = brief[a.starts[m.a_start] : a.ends[m.a_start + m.length - 1]]
    b_text = opinion[b.starts[m.b_start] : b.ends[m.b_start + m.length - 1]]
    assert a_text == b_text
    assert a_text.startswith("public confidence")
