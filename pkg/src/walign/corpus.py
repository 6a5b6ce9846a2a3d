"""Corpus ingestion: tokenization, stable token ids, and document-frequency stats.

Positions are 1-based in every public contract; token ids are dense
non-negative integers assigned by first appearance in a single pass
(except the byte scheme, whose ids are the byte values themselves).
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import BoundsError, DuplicateId, EmptyText

log = logging.getLogger(__name__)

SCHEME_WHITESPACE = "whitespace"
SCHEME_QGRAM = "qgram"
SCHEME_BYTE = "byte"
SCHEMES = (SCHEME_WHITESPACE, SCHEME_QGRAM, SCHEME_BYTE)


@dataclass(frozen=True, slots=True)
class TokenizerConfig:
    scheme: str = SCHEME_WHITESPACE
    q: int = 2
    lowercase: bool = False

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown tokenization scheme: {self.scheme!r}")
        if self.scheme == SCHEME_QGRAM and self.q < 1:
            raise ValueError("q-gram size must be >= 1")


def tokenize(raw: str, cfg: TokenizerConfig) -> list[str]:
    """Split raw text into token surface strings.

    Deterministic: identical input always yields the identical sequence.
    Raises EmptyText when nothing survives (empty input, whitespace-only
    input, or input shorter than the q-gram size).
    """
    text = raw.lower() if cfg.lowercase else raw
    if cfg.scheme == SCHEME_WHITESPACE:
        surfaces = text.split()
    elif cfg.scheme == SCHEME_QGRAM:
        surfaces = [text[i : i + cfg.q] for i in range(len(text) - cfg.q + 1)]
    else:
        surfaces = [f"{b:02x}" for b in text.encode("utf-8")]
    if not surfaces:
        raise EmptyText(f"input tokenizes to nothing under {cfg.scheme}")
    return surfaces


class Vocabulary:
    """Bidirectional surface <-> dense id mapping.

    For the byte scheme the 256 single-byte surfaces are preassigned so
    that a token's id equals its byte value regardless of appearance order.
    """

    def __init__(self, surfaces: Sequence[str] = ()) -> None:
        self._surfaces: list[str] = []
        self._ids: dict[str, int] = {}
        for s in surfaces:
            self.add(s)

    @classmethod
    def for_scheme(cls, cfg: TokenizerConfig) -> "Vocabulary":
        if cfg.scheme == SCHEME_BYTE:
            return cls([f"{b:02x}" for b in range(256)])
        return cls()

    def add(self, surface: str) -> int:
        tid = self._ids.get(surface)
        if tid is None:
            tid = len(self._surfaces)
            self._ids[surface] = tid
            self._surfaces.append(surface)
        return tid

    def lookup(self, surface: str) -> int | None:
        return self._ids.get(surface)

    def surface(self, token_id: int) -> str:
        return self._surfaces[token_id]

    def surfaces(self) -> list[str]:
        return list(self._surfaces)

    def __len__(self) -> int:
        return len(self._surfaces)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._surfaces == other._surfaces


@dataclass(frozen=True, slots=True)
class Text:
    """A tokenized text: immutable token-id sequence, 1-indexed accessors."""

    text_id: int
    tokens: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def token_at(self, i: int) -> int:
        if not 1 <= i <= len(self.tokens):
            raise BoundsError(f"position {i} out of range [1, {len(self.tokens)}]")
        return self.tokens[i - 1]


def token_freq(text: Text, token: int, i: int | None = None, j: int | None = None) -> int:
    """Occurrences of `token` in text, optionally within 1-based bounds [i, j]."""
    n = len(text)
    if i is None and j is None:
        return text.tokens.count(token)
    if i is None or j is None or not (1 <= i <= j <= n):
        raise BoundsError(f"bounds ({i}, {j}) invalid for text of length {n}")
    return text.tokens[i - 1 : j].count(token)


@dataclass(slots=True)
class CorpusStats:
    """Corpus-level counts backing IDF weights.

    num_texts is N; doc_freq maps token id -> number of texts containing it;
    max_freq maps text id -> that text's maximum token frequency.
    """

    num_texts: int = 0
    doc_freq: dict[int, int] = field(default_factory=dict)
    max_freq: dict[int, int] = field(default_factory=dict)


@dataclass(slots=True)
class IngestResult:
    texts: list[Text]
    stats: CorpusStats
    vocab: Vocabulary
    skipped: list[int]


def ingest_corpus(
    records: Iterable[tuple[int, str]],
    cfg: TokenizerConfig,
    vocab: Vocabulary | None = None,
) -> IngestResult:
    """Tokenize a stream of (text_id, raw) records into Texts plus stats.

    Texts that tokenize to nothing are skipped with a warning rather than
    failing the run; duplicate text ids raise DuplicateId.
    """
    vocab = vocab if vocab is not None else Vocabulary.for_scheme(cfg)
    texts: list[Text] = []
    skipped: list[int] = []
    stats = CorpusStats()
    seen: set[int] = set()
    for text_id, raw in records:
        if text_id in seen:
            raise DuplicateId(f"text id {text_id} appears more than once")
        seen.add(text_id)
        try:
            surfaces = tokenize(raw, cfg)
        except EmptyText:
            log.warning("skipping text %d: tokenizes to nothing", text_id)
            skipped.append(text_id)
            continue
        ids = tuple(vocab.add(s) for s in surfaces)
        texts.append(Text(text_id, ids))
        counts = Counter(ids)
        stats.num_texts += 1
        stats.max_freq[text_id] = max(counts.values())
        for tid in counts:
            stats.doc_freq[tid] = stats.doc_freq.get(tid, 0) + 1
    return IngestResult(texts, stats, vocab, skipped)


def encode_query(raw: str, vocab: Vocabulary, cfg: TokenizerConfig) -> tuple[Text, set[int]]:
    """Map a query string onto a corpus vocabulary.

    Surfaces unseen during ingestion get fresh ids past the corpus vocab
    (deterministic, first-appearance order). Those ids are returned so the
    weighting layer can apply its unseen-token convention. The query text
    id is -1 by convention.
    """
    surfaces = tokenize(raw, cfg)
    local: dict[str, int] = {}
    unseen: set[int] = set()
    ids = []
    for s in surfaces:
        tid = vocab.lookup(s)
        if tid is None:
            tid = local.get(s)
            if tid is None:
                tid = len(vocab) + len(local)
                local[s] = tid
                unseen.add(tid)
        ids.append(tid)
    return Text(-1, tuple(ids)), unseen


def read_jsonl(path: str) -> Iterator[tuple[int, str]]:
    """Yield (id, text) records from a JSON-lines corpus file."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                yield int(obj["id"]), obj["text"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
