"""Query answering: sketch the query, fetch collided windows, plane-sweep.

A cell (i, j) of a data text is reported when at least ceil(k * theta)
of the k collided window lists cover it, i.e. when the estimated
similarity between the query and T[i, j] reaches the threshold. The
qualifying region is returned as disjoint maximal rectangles, since the
raw cell set can be quadratic in text length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Text
from .errors import EmptyQuery
from .hashing import KIND_UNIVERSAL, HashValue
from .index import InvertedIndex, lookup
from .partition import CompactWindow
from .weights import WeightScheme

CELL_FLATTEN_CAP = 100_000


def support_threshold(k: int, theta: float) -> int:
    """Collisions required at threshold theta, clamped to at least one so a
    zero threshold cannot vacuously report every cell of every text."""
    return max(1, math.ceil(k * theta))


@dataclass(frozen=True, slots=True)
class MatchRect:
    """Rows [a, b] x columns [c, d] where support >= the query threshold;
    support_min is the smallest support attained inside the rectangle."""

    a: int
    b: int
    c: int
    d: int
    support_min: int

    def cell_count(self) -> int:
        return (self.b - self.a + 1) * (self.d - self.c + 1)


@dataclass(slots=True)
class QueryResult:
    theta: float
    k: int
    threshold: int
    rects: dict[int, list[MatchRect]] = field(default_factory=dict)

    def cells(self, cap: int = CELL_FLATTEN_CAP) -> set[tuple[int, int, int]]:
        total = sum(r.cell_count() for rs in self.rects.values() for r in rs)
        if total > cap:
            raise ValueError(f"{total} cells exceed flatten cap {cap}")
        out: set[tuple[int, int, int]] = set()
        for text_id, rs in self.rects.items():
            for r in rs:
                for i in range(r.a, r.b + 1):
                    for j in range(r.c, r.d + 1):
                        out.add((text_id, i, j))
        return out

    def is_empty(self) -> bool:
        return not any(self.rects.values())


def query_sketch(index: InvertedIndex, query: Text) -> list[HashValue]:
    """The query's k min-hashes under the index's own hash functions."""
    counts: dict[int, int] = {}
    for tok in query.tokens:
        counts[tok] = counts.get(tok, 0) + 1
    sketch: list[HashValue] = []
    if index.kind == KIND_UNIVERSAL:
        for fn in index.fns:
            sketch.append(
                min(fn.evaluate(t, x) for t, f in counts.items() for x in range(1, f + 1))
            )
    else:
        scheme: WeightScheme = index.scheme
        weights = {t: scheme.weight(t, f) for t, f in counts.items()}
        for fn in index.fns:
            sketch.append(min(fn.evaluate(t, w) for t, w in weights.items()))
    return sketch


def plane_sweep(windows: Sequence[CompactWindow], tau: int) -> list[MatchRect]:
    """Disjoint rectangles of cells covered by >= tau of the given windows.

    Sweeps row strips between consecutive a / b+1 boundaries; inside a
    strip the active windows are fixed, so a difference array over the
    compressed column boundaries yields the qualifying column runs.
    Strips with identical runs are coalesced into taller rectangles.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not windows:
        return []
    starts: dict[int, list[CompactWindow]] = {}
    stops: dict[int, list[CompactWindow]] = {}
    row_marks: set[int] = set()
    for w in windows:
        starts.setdefault(w.a, []).append(w)
        stops.setdefault(w.b + 1, []).append(w)
        row_marks.add(w.a)
        row_marks.add(w.b + 1)
    rows = sorted(row_marks)
    active: dict[tuple[int, int], int] = {}  # (c, d) -> multiplicity

    out: list[MatchRect] = []
    open_rects: list[list] = []  # [row_start, c, d, support_min], still growing
    prev_runs: list[tuple[int, int, int]] = []

    def flush(upto_row: int) -> None:
        for row_start, c, d, smin in open_rects:
            out.append(MatchRect(row_start, upto_row, c, d, smin))
        open_rects.clear()

    for ridx, row in enumerate(rows):
        for w in starts.get(row, ()):
            key = (w.c, w.d)
            active[key] = active.get(key, 0) + 1
        for w in stops.get(row, ()):
            key = (w.c, w.d)
            left = active[key] - 1
            if left:
                active[key] = left
            else:
                del active[key]
        strip_end = (rows[ridx + 1] - 1) if ridx + 1 < len(rows) else None
        if strip_end is None:
            runs: list[tuple[int, int, int]] = []
        else:
            runs = _qualifying_runs(active, tau)
        if runs != prev_runs:
            flush(row - 1)
            open_rects.extend([row, c, d, smin] for c, d, smin in runs)
            prev_runs = runs
    # the final strip is always empty (last boundary is max b + 1)
    assert not active and not open_rects, "sweep did not drain"
    return out


def _qualifying_runs(active: dict[tuple[int, int], int], tau: int) -> list[tuple[int, int, int]]:
    """Maximal column runs with coverage >= tau plus their minimum support."""
    if not active:
        return []
    marks: dict[int, int] = {}
    for (c, d), mult in active.items():
        marks[c] = marks.get(c, 0) + mult
        marks[d + 1] = marks.get(d + 1, 0) - mult
    bounds = sorted(marks)
    runs: list[tuple[int, int, int]] = []
    depth = 0
    run_start = None
    run_min = 0
    for idx, col in enumerate(bounds):
        depth += marks[col]
        nxt = bounds[idx + 1] - 1 if idx + 1 < len(bounds) else None
        if depth >= tau and nxt is not None:
            if run_start is None:
                run_start = col
                run_min = depth
            else:
                run_min = min(run_min, depth)
        else:
            if run_start is not None:
                runs.append((run_start, col - 1, run_min))
                run_start = None
    assert depth == 0 and run_start is None
    return runs


def run_query(index: InvertedIndex, query: Text, theta: float) -> QueryResult:
    """All cells of all indexed texts whose estimated similarity with the
    query reaches theta, as per-text disjoint rectangles."""
    if len(query) == 0:
        raise EmptyQuery("query has no tokens")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    tau = support_threshold(index.k, theta)
    sketch = query_sketch(index, query)
    by_text: dict[int, list[CompactWindow]] = {}
    for i, v in enumerate(sketch, start=1):
        for w in lookup(index, i, v):
            by_text.setdefault(w.text_id, []).append(w)
    result = QueryResult(theta=theta, k=index.k, threshold=tau)
    for text_id in sorted(by_text):
        rects = plane_sweep(by_text[text_id], tau)
        if rects:
            result.rects[text_id] = rects
    return result


def longest_match(result: QueryResult) -> dict[int, tuple[int, int]]:
    """Per text, the longest reported cell (i, j), ties to the smallest i
    then smallest j."""
    best: dict[int, tuple[int, int]] = {}
    for text_id, rects in result.rects.items():
        choice: tuple[int, int, int] | None = None  # (-length, i, j)
        for r in rects:
            cand = (-(r.d - r.a + 1), r.a, r.d)
            if choice is None or cand < choice:
                choice = cand
        if choice is not None:
            best[text_id] = (choice[1], choice[2])
    return best
