"""Brute-force reference implementations used to cross-check the engine.

Everything here computes straight from the definitions: min-hash grids by
enumerating hash value sets, similarities by the min/max formulas, query
answering by scoring every subsequence. Deliberately naive and capped in
size; shares the hashing and weighting primitives with the engine but
none of the partitioning machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .corpus import Text
from .errors import BadParams, BoundsError, CapExceeded
from .hashing import HashValue
from .weights import WeightScheme

GRID_CAP = 512
QUERY_CELL_CAP = 2_000_000
WEIGHT_TOL = 1e-12


@dataclass(slots=True)
class MinHashGrid:
    """Triangular table of min-hashes for every subsequence, 1-based."""

    n: int
    rows: list[list[HashValue]]  # rows[i-1][j-i] = min-hash of T[i, j]

    def value(self, i: int, j: int) -> HashValue:
        if not 1 <= i <= j <= self.n:
            raise BoundsError(f"cell ({i}, {j}) outside triangle of size {self.n}")
        return self.rows[i - 1][j - i]


def hash_value_set(text: Text, i: int, j: int, fn, scheme: WeightScheme | None = None) -> set:
    """All hash values h(t, x) for tokens t in T[i, j], x up to the local count."""
    if not 1 <= i <= j <= len(text):
        raise BoundsError(f"bounds ({i}, {j}) invalid")
    values = set()
    counts: dict[int, int] = {}
    for pos in range(i, j + 1):
        tok = text.tokens[pos - 1]
        x = counts.get(tok, 0) + 1
        counts[tok] = x
        if scheme is None:
            values.add(fn.evaluate(tok, x))
        else:
            values.add(fn.evaluate(tok, scheme.weight(tok, x)))
    return values


def minhash_grid(text: Text, fn, scheme: WeightScheme | None = None, cap: int = GRID_CAP) -> MinHashGrid:
    """Min-hash of every subsequence by direct enumeration.

    Each row extends the hash value set one token at a time, exactly
    following its definition; no key or skyline logic is involved.
    """
    n = len(text)
    if n > cap:
        raise CapExceeded(f"text length {n} exceeds grid cap {cap}")
    hash_at = (
        fn.evaluate
        if scheme is None
        else (lambda tok, x: fn.evaluate(tok, scheme.weight(tok, x)))
    )
    rows = []
    for i in range(1, n + 1):
        counts: dict[int, int] = {}
        row: list[HashValue] = []
        best: HashValue | None = None
        for j in range(i, n + 1):
            tok = text.tokens[j - 1]
            x = counts.get(tok, 0) + 1
            counts[tok] = x
            v = hash_at(tok, x)
            if best is None or v < best:
                best = v
            row.append(best)
        rows.append(row)
    return MinHashGrid(n, rows)


def multiset_jaccard(t1: Text, t2: Text) -> Fraction:
    """Exact multi-set Jaccard: sum of min counts over sum of max counts."""
    if len(t1) == 0 or len(t2) == 0:
        raise ValueError("multiset_jaccard needs non-empty texts")
    tokens = set(t1.tokens) | set(t2.tokens)
    num = den = 0
    for tok in tokens:
        f1 = t1.tokens.count(tok)
        f2 = t2.tokens.count(tok)
        num += min(f1, f2)
        den += max(f1, f2)
    return Fraction(num, den)


def weighted_jaccard(t1: Text, t2: Text, scheme: WeightScheme) -> float:
    """Weighted Jaccard with w(t, x) = tf(x) * idf(t); raw_count x unary
    reproduces the multi-set value exactly."""
    if len(t1) == 0 or len(t2) == 0:
        raise ValueError("weighted_jaccard needs non-empty texts")
    tokens = set(t1.tokens) | set(t2.tokens)
    num = den = 0.0
    for tok in tokens:
        f1 = t1.tokens.count(tok)
        f2 = t2.tokens.count(tok)
        w1 = scheme.weight(tok, f1) if f1 else 0.0
        w2 = scheme.weight(tok, f2) if f2 else 0.0
        num += min(w1, w2)
        den += max(w1, w2)
    return num / den


def sketch_of(text: Text, fns, scheme: WeightScheme | None = None) -> list[HashValue]:
    """Min-hash sketch computed directly from the hash value sets."""
    return [min(hash_value_set(text, 1, len(text), fn, scheme)) for fn in fns]


def support_threshold(k: int, theta: float) -> int:
    """Number of sketch collisions required at threshold theta; at least 1
    so a zero threshold does not report every cell of every text."""
    return max(1, math.ceil(k * theta))


def brute_force_query(
    corpus: Sequence[Text],
    query: Text,
    theta: float,
    fns=None,
    scheme: WeightScheme | None = None,
    cap: int = QUERY_CELL_CAP,
) -> set[tuple[int, int, int]]:
    """Every (text_id, i, j) whose similarity with the query passes theta.

    With hash functions given, similarity is the sketch estimate (number
    of min-hash collisions over k) and the threshold is the same ceil
    convention the engine uses. Without them, the exact similarity is
    evaluated per subsequence: multi-set Jaccard when no scheme is given,
    weighted Jaccard otherwise.
    """
    total = sum(len(t) * len(t) for t in corpus)
    if total > cap:
        raise CapExceeded(f"{total} subsequence cells exceed cap {cap}")
    results: set[tuple[int, int, int]] = set()
    if fns is not None:
        k = len(fns)
        need = support_threshold(k, theta)
        qsketch = sketch_of(query, fns, scheme)
        for text in corpus:
            grids = [minhash_grid(text, fn, scheme, cap=len(text)) for fn in fns]
            for i in range(1, len(text) + 1):
                for j in range(i, len(text) + 1):
                    hits = sum(1 for qv, g in zip(qsketch, grids) if qv == g.value(i, j))
                    if hits >= need:
                        results.add((text.text_id, i, j))
        return results
    for text in corpus:
        for i in range(1, len(text) + 1):
            for j in range(i, len(text) + 1):
                sub = Text(text.text_id, text.tokens[i - 1 : j])
                if scheme is None:
                    if multiset_jaccard(query, sub) >= Fraction(theta).limit_denominator(10**9):
                        results.add((text.text_id, i, j))
                else:
                    if weighted_jaccard(query, sub, scheme) >= theta - WEIGHT_TOL:
                        results.add((text.text_id, i, j))
    return results


def hard_case_text(n: int, f: int, text_id: int = 0) -> Text:
    """Block text: token i repeated f times, back to back, n tokens total.

    When f does not divide n the final block is short. These texts drive
    the partition-size lower bound, so they make good stress generators.
    """
    if f < 1 or n < 1:
        raise BadParams("n and f must be >= 1")
    if f > n:
        raise BadParams(f"max frequency {f} exceeds length {n}")
    tokens = tuple(i // f for i in range(n))
    return Text(text_id, tokens)


def check_partition(text: Text, windows, grid: MinHashGrid) -> list[str]:
    """Validate a window set against an oracle grid.

    Returns human-readable problem strings (empty means the windows form
    a correct partition): double-covered cells, uncovered cells, and
    label mismatches.
    """
    n = len(text)
    problems: list[str] = []
    seen: dict[tuple[int, int], int] = {}
    for idx, w in enumerate(windows):
        if not (1 <= w.a <= w.b <= w.c <= w.d <= n):
            problems.append(f"window {idx} has bad coordinates {(w.a, w.b, w.c, w.d)}")
            continue
        for i in range(w.a, w.b + 1):
            for j in range(w.c, w.d + 1):
                if (i, j) in seen:
                    problems.append(f"cell ({i}, {j}) covered by windows {seen[(i, j)]} and {idx}")
                else:
                    seen[(i, j)] = idx
                if grid.value(i, j) != w.value:
                    problems.append(
                        f"cell ({i}, {j}) labeled {w.value!r} but oracle says {grid.value(i, j)!r}"
                    )
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if (i, j) not in seen:
                problems.append(f"cell ({i}, {j}) not covered")
    return problems
