"""Build, persist, and load the k inverted indexes of compact windows.

File format (version 1, little-endian throughout)::

    magic     4s   "WALN"
    version   u16
    kind      u8   0 = universal, 1 = icws
    k         u32
    mode      u8   0 = active_keys, 1 = all_keys (provenance echo)
    tf, idf   u8 u8   weight scheme id (0xFF, 0xFF when absent)
    tokenizer u8 u8 u8   scheme (0 ws / 1 qgram / 2 byte / 0xFF none), q, lowercase
    params    k * (3 x u64)  universal a1, a2, b   |   k * u64  icws seeds
    vocab     u32 count, then per token: u16 length + utf-8 bytes
    stats     u8 flag; if 1: u32 num_texts, u32 count, count * u32 doc freq
    body      per function: u32 run count, then sorted runs of
              value + u32 window count + windows (5 x u32 each);
              universal values are u64, icws values are u32 t, i64 z, f64 a
    trailer   8-byte blake2b checksum of everything above

Runs are sorted by value (icws: by (t, z)) and windows within a run by
(text_id, a, c), so identical inputs always serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import io
import os
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import BinaryIO, Sequence

from .corpus import CorpusStats, Text, TokenizerConfig, Vocabulary
from .errors import CorruptIndex, UnsupportedVersion
from .hashing import (
    KIND_ICWS,
    KIND_UNIVERSAL,
    HashValue,
    IcwsHashFn,
    IcwsValue,
    UniversalHashFn,
    sample_family,
)
from .partition import MODE_ACTIVE, MODES, CompactWindow, monotonic_partitioning
from .weights import IDF_KINDS, IDF_UNARY, TF_KINDS, TF_RAW, WeightScheme

MAGIC = b"WALN"
VERSION = 1
_KIND_CODE = {KIND_UNIVERSAL: 0, KIND_ICWS: 1}
_KIND_NAME = {v: k for k, v in _KIND_CODE.items()}
_SCHEME_CODE = {"whitespace": 0, "qgram": 1, "byte": 2}
_SCHEME_NAME = {v: k for k, v in _SCHEME_CODE.items()}


@dataclass(slots=True)
class InvertedIndex:
    kind: str
    k: int
    fns: list
    mode: str = MODE_ACTIVE
    scheme: WeightScheme | None = None
    vocab: Vocabulary | None = None
    tokenizer: TokenizerConfig | None = None
    lists: list[dict[HashValue, list[CompactWindow]]] = field(default_factory=list)

    def total_windows(self) -> int:
        return sum(len(ws) for lst in self.lists for ws in lst.values())

    def windows_per_fn(self) -> list[int]:
        return [sum(len(ws) for ws in lst.values()) for lst in self.lists]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.k == other.k
            and self.fns == other.fns
            and self.mode == other.mode
            and self.scheme == other.scheme
            and self.vocab == other.vocab
            and self.tokenizer == other.tokenizer
            and self.lists == other.lists
        )


def lookup(index: InvertedIndex, fn_index: int, value: HashValue) -> list[CompactWindow]:
    """Windows stored under `value` for hash function `fn_index` (1-based)."""
    if not 1 <= fn_index <= index.k:
        raise ValueError(f"function index {fn_index} outside [1, {index.k}]")
    return index.lists[fn_index - 1].get(value, [])


def _worker_count() -> int:
    raw = os.environ.get("WALIGN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build(
    texts: Sequence[Text],
    k: int,
    master_seed: int,
    *,
    kind: str = KIND_UNIVERSAL,
    scheme: WeightScheme | None = None,
    mode: str = MODE_ACTIVE,
    vocab: Vocabulary | None = None,
    tokenizer: TokenizerConfig | None = None,
    fns: list | None = None,
) -> InvertedIndex:
    """Partition every (text, function) pair and index the windows by value.

    Deterministic for fixed inputs. Supplying `fns` bypasses family
    sampling (used with table hashes in tests); otherwise k functions are
    drawn from `kind` with `master_seed`. The weighted kind defaults to
    raw-count tf with unary idf, under which the estimated similarity
    coincides with multi-set Jaccard.
    """
    if not texts:
        raise ValueError("corpus must be non-empty")
    if mode not in MODES:
        raise ValueError(f"unknown mode: {mode!r}")
    if fns is None:
        fns = sample_family(kind, k, master_seed)
    else:
        k = len(fns)
    if kind == KIND_ICWS and scheme is None:
        scheme = WeightScheme(TF_RAW, IDF_UNARY)
    if kind == KIND_UNIVERSAL and scheme is not None:
        raise ValueError("weight schemes apply to the icws kind only")

    jobs = [(ti, fi) for ti in range(len(texts)) for fi in range(k)]

    def run(job: tuple[int, int]) -> tuple[tuple[int, int], list[CompactWindow]]:
        ti, fi = job
        windows = monotonic_partitioning(texts[ti], fns[fi], scheme, mode, fn_index=fi + 1)
        return job, windows

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            produced = dict(pool.map(run, jobs))
    else:
        produced = dict(map(run, jobs))

    lists: list[dict[HashValue, list[CompactWindow]]] = [{} for _ in range(k)]
    for job in jobs:  # deterministic merge order regardless of scheduling
        for w in produced[job]:
            lists[job[1]].setdefault(w.value, []).append(w)
    for lst in lists:
        for ws in lst.values():
            ws.sort(key=lambda w: (w.text_id, w.a, w.c))
    return InvertedIndex(
        kind=kind,
        k=k,
        fns=list(fns),
        mode=mode,
        scheme=scheme,
        vocab=vocab,
        tokenizer=tokenizer,
        lists=lists,
    )


def _value_sort_key(kind: str):
    if kind == KIND_UNIVERSAL:
        return lambda v: v
    return lambda v: (v.t, v.z)


def _write_value(buf: BinaryIO, kind: str, value: HashValue) -> None:
    if kind == KIND_UNIVERSAL:
        buf.write(struct.pack("<Q", value))
    else:
        buf.write(struct.pack("<Iqd", value.t, value.z, value.a))


def _read_value(buf: BinaryIO, kind: str) -> HashValue:
    if kind == KIND_UNIVERSAL:
        return struct.unpack("<Q", _take(buf, 8))[0]
    t, z, a = struct.unpack("<Iqd", _take(buf, 20))
    return IcwsValue(t, z, a)


def _take(buf: BinaryIO, size: int) -> bytes:
    data = buf.read(size)
    if len(data) != size:
        raise CorruptIndex("unexpected end of index data")
    return data


def save(index: InvertedIndex, path: str) -> None:
    """Serialize to the versioned binary format; bit-exact for equal inputs."""
    if index.kind not in _KIND_CODE:
        raise ValueError(f"kind {index.kind!r} is not serializable")
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<HBI", VERSION, _KIND_CODE[index.kind], index.k))
    buf.write(struct.pack("<B", 1 if index.mode == "all_keys" else 0))
    if index.scheme is None:
        buf.write(struct.pack("<BB", 0xFF, 0xFF))
    else:
        buf.write(
            struct.pack(
                "<BB",
                TF_KINDS.index(index.scheme.tf_kind),
                IDF_KINDS.index(index.scheme.idf_kind),
            )
        )
    if index.tokenizer is None:
        buf.write(struct.pack("<BBB", 0xFF, 0, 0))
    else:
        buf.write(
            struct.pack(
                "<BBB",
                _SCHEME_CODE[index.tokenizer.scheme],
                index.tokenizer.q,
                1 if index.tokenizer.lowercase else 0,
            )
        )
    for fn in index.fns:
        if index.kind == KIND_UNIVERSAL:
            buf.write(struct.pack("<QQQ", fn.a1, fn.a2, fn.b))
        else:
            buf.write(struct.pack("<Q", fn.seed))
    surfaces = index.vocab.surfaces() if index.vocab is not None else []
    buf.write(struct.pack("<I", len(surfaces)))
    for s in surfaces:
        raw = s.encode("utf-8")
        buf.write(struct.pack("<H", len(raw)))
        buf.write(raw)
    stats = index.scheme.stats if index.scheme is not None else None
    if stats is not None:
        buf.write(struct.pack("<B", 1))
        size = (max(stats.doc_freq) + 1) if stats.doc_freq else 0
        buf.write(struct.pack("<II", stats.num_texts, size))
        dense = [stats.doc_freq.get(t, 0) for t in range(size)]
        buf.write(struct.pack(f"<{size}I", *dense))
    else:
        buf.write(struct.pack("<B", 0))
    key_of = _value_sort_key(index.kind)
    for lst in index.lists:
        values = sorted(lst.keys(), key=key_of)
        buf.write(struct.pack("<I", len(values)))
        for v in values:
            _write_value(buf, index.kind, v)
            windows = lst[v]
            buf.write(struct.pack("<I", len(windows)))
            for w in windows:
                buf.write(struct.pack("<IIIII", w.text_id, w.a, w.b, w.c, w.d))
    payload = buf.getvalue()
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(digest)


def load(path: str) -> InvertedIndex:
    """Read an index file back; rejects bad magic, versions, and checksums."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 8 or blob[: len(MAGIC)] != MAGIC:
        raise CorruptIndex(f"{path}: not an index file")
    payload, digest = blob[:-8], blob[-8:]
    if hashlib.blake2b(payload, digest_size=8).digest() != digest:
        raise CorruptIndex(f"{path}: checksum mismatch")
    buf = io.BytesIO(payload)
    _take(buf, len(MAGIC))
    version, kind_code, k = struct.unpack("<HBI", _take(buf, 7))
    if version != VERSION:
        raise UnsupportedVersion(f"{path}: format version {version} unsupported")
    if kind_code not in _KIND_NAME:
        raise CorruptIndex(f"{path}: unknown hash kind {kind_code}")
    kind = _KIND_NAME[kind_code]
    mode = "all_keys" if struct.unpack("<B", _take(buf, 1))[0] else MODE_ACTIVE
    tf_code, idf_code = struct.unpack("<BB", _take(buf, 2))
    scheme_kinds = None
    if tf_code != 0xFF:
        try:
            scheme_kinds = (TF_KINDS[tf_code], IDF_KINDS[idf_code])
        except IndexError:
            raise CorruptIndex(f"{path}: bad weight scheme id") from None
    tok_code, q, lower = struct.unpack("<BBB", _take(buf, 3))
    tokenizer = None
    if tok_code != 0xFF:
        if tok_code not in _SCHEME_NAME:
            raise CorruptIndex(f"{path}: bad tokenizer scheme {tok_code}")
        tokenizer = TokenizerConfig(_SCHEME_NAME[tok_code], max(q, 1), bool(lower))
    fns: list = []
    for _ in range(k):
        if kind == KIND_UNIVERSAL:
            a1, a2, b = struct.unpack("<QQQ", _take(buf, 24))
            fns.append(UniversalHashFn(a1, a2, b))
        else:
            fns.append(IcwsHashFn(struct.unpack("<Q", _take(buf, 8))[0]))
    (nsurf,) = struct.unpack("<I", _take(buf, 4))
    surfaces = []
    for _ in range(nsurf):
        (slen,) = struct.unpack("<H", _take(buf, 2))
        surfaces.append(_take(buf, slen).decode("utf-8"))
    vocab = Vocabulary(surfaces) if surfaces else None
    (has_stats,) = struct.unpack("<B", _take(buf, 1))
    stats = None
    if has_stats:
        num_texts, size = struct.unpack("<II", _take(buf, 8))
        dense = struct.unpack(f"<{size}I", _take(buf, 4 * size))
        stats = CorpusStats(
            num_texts=num_texts,
            doc_freq={t: df for t, df in enumerate(dense) if df > 0},
        )
    scheme = None
    if scheme_kinds is not None:
        scheme = WeightScheme(scheme_kinds[0], scheme_kinds[1], stats, unseen_doc_freq=1)
    lists: list[dict[HashValue, list[CompactWindow]]] = []
    for fi in range(k):
        (nvals,) = struct.unpack("<I", _take(buf, 4))
        lst: dict[HashValue, list[CompactWindow]] = {}
        for _ in range(nvals):
            v = _read_value(buf, kind)
            (count,) = struct.unpack("<I", _take(buf, 4))
            ws = []
            for _ in range(count):
                tid, a, b, c, d = struct.unpack("<IIIII", _take(buf, 20))
                ws.append(CompactWindow(tid, fi + 1, v, a, b, c, d))
            lst[v] = ws
        lists.append(lst)
    if buf.read(1):
        raise CorruptIndex(f"{path}: trailing bytes after body")
    return InvertedIndex(
        kind=kind,
        k=k,
        fns=fns,
        mode=mode,
        scheme=scheme,
        vocab=vocab,
        tokenizer=tokenizer,
        lists=lists,
    )


def build_stats_sidecar(index: InvertedIndex, texts: Sequence[Text], build_seconds: float) -> dict:
    """Summary recorded next to the index file."""
    hist: dict[int, int] = {}
    for t in texts:
        counts: dict[int, int] = {}
        for tok in t.tokens:
            counts[tok] = counts.get(tok, 0) + 1
        fmax = max(counts.values())
        hist[fmax] = hist.get(fmax, 0) + 1
    return {
        "windows_total": index.total_windows(),
        "windows_per_fn": index.windows_per_fn(),
        "build_seconds": build_seconds,
        "max_freq_histogram": {str(f): c for f, c in sorted(hist.items())},
    }


def timed_build(*args, **kwargs) -> tuple[InvertedIndex, float]:
    start = time.perf_counter()
    idx = build(*args, **kwargs)
    return idx, time.perf_counter() - start
