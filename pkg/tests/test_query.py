import random

import pytest

from walign.corpus import Text, TokenizerConfig, encode_query, ingest_corpus
from walign.errors import EmptyQuery
from walign.hashing import KIND_ICWS, KIND_UNIVERSAL
from walign.index import build
from walign.oracle import brute_force_query
from walign.partition import CompactWindow
from walign.query import (
    MatchRect,
    QueryResult,
    longest_match,
    plane_sweep,
    run_query,
    support_threshold,
)

from conftest import random_text


def rect(a, b, c, d, v=0, text_id=0, fn_index=1):
    return CompactWindow(text_id, fn_index, v, a, b, c, d)


def cell_support(windows, i, j):
    return sum(1 for w in windows if w.a <= i <= w.b and w.c <= j <= w.d)


# --- threshold convention ---------------------------------------------------


def test_support_threshold():
    assert support_threshold(8, 0.0) == 1
    assert support_threshold(8, 0.5) == 4
    assert support_threshold(8, 0.51) == 5
    assert support_threshold(8, 1.0) == 8


# --- plane sweep ------------------------------------------------------------


def test_sweep_single_window_verbatim():
    got = plane_sweep([rect(2, 4, 5, 9)], 1)
    assert got == [MatchRect(2, 4, 5, 9, 1)]


def test_sweep_two_identical_windows_stack():
    ws = [rect(1, 3, 4, 6), rect(1, 3, 4, 6)]
    assert plane_sweep(ws, 2) == [MatchRect(1, 3, 4, 6, 2)]
    assert plane_sweep(ws, 3) == []


def test_sweep_rejects_bad_tau():
    with pytest.raises(ValueError):
        plane_sweep([], 0)


def test_sweep_against_cell_counting_oracle():
    rng = random.Random(14)
    for tau in range(1, 6):
        windows = []
        for _ in range(200):
            a = rng.randint(1, 50)
            b = rng.randint(a, 50)
            c = rng.randint(b, 50)
            d = rng.randint(c, 50)
            windows.append(rect(a, b, c, d))
        rects = plane_sweep(windows, tau)
        covered: dict[tuple[int, int], int] = {}
        for r in rects:
            for i in range(r.a, r.b + 1):
                for j in range(r.c, r.d + 1):
                    assert (i, j) not in covered, "rectangles overlap"
                    covered[(i, j)] = r.support_min
        for i in range(1, 51):
            for j in range(1, 51):
                support = cell_support(windows, i, j)
                if support >= tau:
                    assert (i, j) in covered
                    assert covered[(i, j)] <= support
                else:
                    assert (i, j) not in covered
        for r in rects:
            assert r.support_min == min(
                cell_support(windows, i, j)
                for i in range(r.a, r.b + 1)
                for j in range(r.c, r.d + 1)
            )


# --- end-to-end query -------------------------------------------------------


def alignment_setup(k=256, seed=2):
    res = ingest_corpus([(0, "A B B C D E"), (1, "B C C D E F")], TokenizerConfig())
    idx = build(res.texts, k, seed, kind=KIND_UNIVERSAL, vocab=res.vocab)
    q, _ = encode_query("A C E", res.vocab, TokenizerConfig())
    return res, idx, q


def test_alignment_example_with_large_sketch():
    # frozen seed: estimates close to exact keep the three true spans in
    # and the 2/5-similarity span out at theta = 0.5
    _res, idx, q = alignment_setup()
    cells = run_query(idx, q, 0.5).cells()
    assert {(0, 1, 6), (0, 4, 6), (1, 3, 5)} <= cells
    assert (1, 2, 5) not in cells


def test_theta_zero_reports_every_collided_cell():
    _res, idx, q = alignment_setup(k=16, seed=3)
    result = run_query(idx, q, 0.0)
    assert result.threshold == 1
    brute = brute_force_query([t for t in _res.texts], q, 0.0, fns=idx.fns)
    assert result.cells() == brute


def test_empty_query_rejected(worked_text):
    idx = build([worked_text], 2, 1)
    with pytest.raises(EmptyQuery):
        run_query(idx, Text(-1, ()), 0.5)
    with pytest.raises(ValueError):
        run_query(idx, Text(-1, (0,)), 1.5)


def test_monotone_in_theta():
    rng = random.Random(21)
    texts = [random_text(rng, 25, 4, text_id=i) for i in range(3)]
    idx = build(texts, 8, 55)
    q = random_text(rng, 6, 4, text_id=-1)
    prev = None
    for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
        cells = run_query(idx, q, theta).cells()
        if prev is not None:
            assert cells <= prev
        prev = cells


def test_engine_equals_brute_force_shared_fns():
    rng = random.Random(22)
    for case in range(12):
        kind = KIND_UNIVERSAL if case % 2 else KIND_ICWS
        texts = [random_text(rng, 30, 5, text_id=i) for i in range(3)]
        k = rng.choice((4, 8, 16))
        idx = build(texts, k, rng.getrandbits(60), kind=kind)
        q = random_text(rng, 8, 5, text_id=-1)
        theta = rng.choice((0.25, 0.5, 0.75, 1.0))
        assert run_query(idx, q, theta).cells() == brute_force_query(
            texts, q, theta, fns=idx.fns, scheme=idx.scheme
        )


def test_support_sound_and_complete_per_cell():
    rng = random.Random(23)
    texts = [random_text(rng, 20, 3, text_id=i) for i in range(2)]
    idx = build(texts, 8, 77)
    q = random_text(rng, 5, 3, text_id=-1)
    result = run_query(idx, q, 0.25)
    from walign.query import query_sketch
    from walign.index import lookup

    sketch = query_sketch(idx, q)
    collided = {
        t.text_id: [w for i, v in enumerate(sketch, 1) for w in lookup(idx, i, v) if w.text_id == t.text_id]
        for t in texts
    }
    reported = result.cells()
    for t in texts:
        for i in range(1, len(t) + 1):
            for j in range(i, len(t) + 1):
                support = cell_support(collided[t.text_id], i, j)
                assert ((t.text_id, i, j) in reported) == (support >= result.threshold)


# --- longest match ----------------------------------------------------------


def test_longest_match_prefers_longest_then_leftmost():
    result = QueryResult(theta=0.5, k=4, threshold=2)
    result.rects[0] = [MatchRect(4, 4, 6, 6, 2), MatchRect(1, 2, 5, 6, 2)]
    assert longest_match(result) == {0: (1, 6)}


def test_longest_match_empty_and_single_cell():
    empty = QueryResult(theta=0.5, k=4, threshold=2)
    assert longest_match(empty) == {}
    single = QueryResult(theta=0.5, k=4, threshold=2)
    single.rects[3] = [MatchRect(2, 2, 2, 2, 4)]
    assert longest_match(single) == {3: (2, 2)}


def test_longest_match_on_alignment_example():
    _res, idx, q = alignment_setup()
    best = longest_match(run_query(idx, q, 0.5))
    assert best[0] == (1, 6)


def test_cells_flatten_cap():
    result = QueryResult(theta=0.0, k=1, threshold=1)
    result.rects[0] = [MatchRect(1, 400, 401, 800, 1)]
    with pytest.raises(ValueError):
        result.cells(cap=1000)
