"""Compact-window partitioning of a text's subsequence min-hashes.

One run takes a single text and a single hash function and produces a
set of disjoint rectangles ("compact windows") that jointly cover every
(i, j) index pair, each labeled with the min-hash shared by all the
subsequences it represents.

The algorithm visits position pairs with matching endpoint tokens
("keys") in ascending order of their hash values while maintaining the
skyline of non-dominated visited keys; a key (p, q) dominates (p', q')
when [p, q] is a proper subinterval of [p', q']. Each undominated key
claims the staircase-shaped region of still-unclaimed index pairs whose
subsequences contain it, emitting one window per staircase step.

Two key-generation modes exist: `all_keys` enumerates every key, while
`active_keys` enumerates only keys whose per-token hash value is a strict
running minimum over frequencies, which shrinks the visited set to an
expected O(n + n log f) without changing the output for collision-free
hash functions.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Sequence

from .corpus import Text
from .hashing import HashValue
from .weights import WeightScheme

MODE_ALL = "all_keys"
MODE_ACTIVE = "active_keys"
MODES = (MODE_ALL, MODE_ACTIVE)


@dataclass(slots=True)
class Key:
    """Position pair (x, y), 1-based, with T[x] == T[y].

    `freq` is the number of occurrences of the endpoint token within
    T[x, y]; `value` is the hash of that (token, freq) pair.
    """

    x: int
    y: int
    value: HashValue
    freq: int


@dataclass(frozen=True, slots=True)
class CompactWindow:
    """Rectangle [a, b] x [c, d] of index pairs all sharing min-hash `value`."""

    text_id: int
    fn_index: int
    value: HashValue
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True, slots=True)
class ProbeResult:
    dominated: bool
    lo: int  # largest index with skyline y < c (valid when clear)
    hi: int  # smallest index with skyline x > b (valid when clear)


class Skyline:
    """Coordinate-ordered non-dominated keys with materialized guards.

    Guards (0, 0) and (n+1, n+1) bracket every real key, so probes and
    staircase walks never special-case the ends. Both coordinate arrays
    are non-decreasing, which is what makes the binary searches valid.
    """

    __slots__ = ("n", "xs", "ys")

    def __init__(self, n: int) -> None:
        self.n = n
        self.xs = [0, n + 1]
        self.ys = [0, n + 1]

    def __len__(self) -> int:
        return len(self.xs)

    def key_at(self, idx: int) -> tuple[int, int]:
        return self.xs[idx], self.ys[idx]

    def members(self) -> list[tuple[int, int]]:
        return list(zip(self.xs, self.ys))

    def probe(self, b: int, c: int) -> ProbeResult:
        """Dominance test plus staircase bounds in one pass of searches.

        The key (b, c) is dominated iff the skyline entry with the largest
        y <= c starts at or after b. When clear, `lo` and `hi` delimit the
        entries the key will replace: exactly S[lo+1 .. hi-1] are dominated
        by (b, c).
        """
        jp = bisect_right(self.ys, c) - 1
        if self.xs[jp] >= b and not (self.xs[jp] == b and self.ys[jp] == c):
            return ProbeResult(True, -1, -1)
        lo = bisect_left(self.ys, c) - 1
        hi = bisect_right(self.xs, b)
        return ProbeResult(False, lo, hi)

    def replace(self, b: int, c: int, lo: int, hi: int) -> None:
        """Drop the dominated run S[lo+1 .. hi-1] and insert (b, c)."""
        del self.xs[lo + 1 : hi]
        del self.ys[lo + 1 : hi]
        self.xs.insert(lo + 1, b)
        self.ys.insert(lo + 1, c)


def skyline_dominance_probe(sky: Skyline, key: tuple[int, int]) -> ProbeResult:
    return sky.probe(key[0], key[1])


def emit_staircase(
    sky: Skyline,
    key: tuple[int, int],
    value: HashValue,
    lo: int,
    hi: int,
    text_id: int,
    fn_index: int = 0,
) -> list[CompactWindow]:
    """Windows for the staircase of unclaimed cells below key = (b, c).

    Walks skyline steps k in [lo, hi-1]; the row range of step k is
    [S[k].x + 1, b] and the column range starts at c (first step) or at
    the previous step's y, ending just below the next entry's y. Empty
    rectangles (the y == c corner case) are skipped.
    """
    b, c = key
    xs, ys = sky.xs, sky.ys
    out = []
    cp = c
    for k in range(lo, hi):
        a = xs[k] + 1
        d = ys[k + 1] - 1
        if a <= b and cp <= d:
            out.append(CompactWindow(text_id, fn_index, value, a, b, cp, d))
        cp = ys[k + 1]
    return out


def skyline_update(sky: Skyline, key: tuple[int, int], lo: int, hi: int) -> Skyline:
    sky.replace(key[0], key[1], lo, hi)
    return sky


def _freq_hasher(fn, scheme: WeightScheme | None) -> Callable[[int, int], HashValue]:
    if scheme is None:
        return fn.evaluate
    return lambda token, x: fn.evaluate(token, scheme.weight(token, x))


def _positions_by_token(text: Text) -> dict[int, list[int]]:
    pos: dict[int, list[int]] = {}
    for i, tok in enumerate(text.tokens, start=1):
        pos.setdefault(tok, []).append(i)
    return pos


def generate_keys(text: Text, fn, scheme: WeightScheme | None = None) -> list[Key]:
    """Every key of the text: all same-token position pairs with hashes.

    Produces sum over tokens of f*(f+1)/2 keys; quadratic in the maximum
    token frequency, so prefer generate_active_keys for skewed texts.
    """
    hash_at = _freq_hasher(fn, scheme)
    keys: list[Key] = []
    for token, positions in _positions_by_token(text).items():
        m = len(positions)
        values = [hash_at(token, x) for x in range(1, m + 1)]
        for i in range(m):
            for j in range(i, m):
                freq = j - i + 1
                keys.append(Key(positions[i], positions[j], values[freq - 1], freq))
    return keys


def generate_active_keys(text: Text, fn, scheme: WeightScheme | None = None) -> list[Key]:
    """Only the keys whose hash value strictly undercuts every
    lower-frequency value of the same token (a subset of generate_keys).
    """
    hash_at = _freq_hasher(fn, scheme)
    keys: list[Key] = []
    for token, positions in _positions_by_token(text).items():
        m = len(positions)
        minval = None
        for x in range(1, m + 1):
            v = hash_at(token, x)
            if minval is None or v < minval:
                minval = v
                for i in range(m - x + 1):
                    keys.append(Key(positions[i], positions[i + x - 1], v, x))
    return keys


def key_visit_order(keys: Sequence[Key]) -> list[Key]:
    """Visit order: hash ascending, then frequency descending, then x.

    The frequency tie-break only matters when distinct frequencies of one
    token share a hash value, which happens under weighted sampling; it
    is vacuous for collision-free integer hashing. The x tie-break pins a
    deterministic order so partitions are reproducible byte-for-byte.
    """
    return sorted(keys, key=lambda k: (k.value, -k.freq, k.x))


def _active_visit_stream(text: Text, fn, scheme: WeightScheme | None) -> list[Key]:
    """Active keys already in visit order.

    Sorts the at-most-n distinct active hash values first and then expands
    each to its keys, instead of sorting the full key list; expansion in
    position order matches the global (value, -freq, x) order whenever the
    hash function is collision-free across tokens.
    """
    hash_at = _freq_hasher(fn, scheme)
    triples: list[tuple[HashValue, int, int, list[int]]] = []
    for token, positions in _positions_by_token(text).items():
        minval = None
        for x in range(1, len(positions) + 1):
            v = hash_at(token, x)
            if minval is None or v < minval:
                minval = v
                triples.append((v, x, token, positions))
    triples.sort(key=lambda t: (t[0], -t[1], t[2]))
    keys: list[Key] = []
    for v, x, _token, positions in triples:
        for i in range(len(positions) - x + 1):
            keys.append(Key(positions[i], positions[i + x - 1], v, x))
    return keys


def format_window(w: CompactWindow) -> str:
    """Debug dump line: "text_id fn_index value a b c d"."""
    v = w.value
    value = f"{v.t}:{v.z}:{v.a.hex()}" if not isinstance(v, int) else str(v)
    return f"{w.text_id} {w.fn_index} {value} {w.a} {w.b} {w.c} {w.d}"


def monotonic_partitioning(
    text: Text,
    fn,
    scheme: WeightScheme | None = None,
    mode: str = MODE_ACTIVE,
    fn_index: int = 0,
) -> list[CompactWindow]:
    """Partition all subsequence min-hashes of one text under one function.

    Returns disjoint windows covering every (i, j), 1 <= i <= j <= n.
    Both modes produce identical window sets for collision-free hashing;
    active mode merely skips keys that can never claim cells.
    """
    n = len(text)
    if n < 1:
        raise ValueError("cannot partition an empty text")
    if mode == MODE_ACTIVE:
        keys = _active_visit_stream(text, fn, scheme)
    elif mode == MODE_ALL:
        keys = key_visit_order(generate_keys(text, fn, scheme))
    else:
        raise ValueError(f"unknown mode: {mode!r}")

    sky = Skyline(n)
    windows: list[CompactWindow] = []
    for key in keys:
        probe = sky.probe(key.x, key.y)
        if probe.dominated:
            continue
        windows.extend(
            emit_staircase(
                sky, (key.x, key.y), key.value, probe.lo, probe.hi, text.text_id, fn_index
            )
        )
        sky.replace(key.x, key.y, probe.lo, probe.hi)
    return windows
