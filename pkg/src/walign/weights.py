"""TF-IDF token weighting.

A weight is w(t, x) = tf(x) * idf(t) where x is the token's frequency in
the text at hand. Every supported combination is positive and
non-decreasing in x, which is what the weighted partitioning machinery
assumes about weight functions.
"""

from __future__ import annotations

import logging
import math

from .corpus import CorpusStats
from .errors import BadFrequency, UnknownToken

log = logging.getLogger(__name__)

TF_BINARY = "binary"
TF_RAW = "raw_count"
TF_LOG = "logarithmic"
TF_SQUARED = "squared"
TF_KINDS = (TF_BINARY, TF_RAW, TF_LOG, TF_SQUARED)

IDF_UNARY = "unary"
IDF_STANDARD = "standard"
IDF_SMOOTH = "smooth"
IDF_PROB = "probabilistic"
IDF_KINDS = (IDF_UNARY, IDF_STANDARD, IDF_SMOOTH, IDF_PROB)

EPSILON = 1e-9  # positive-weight floor


def tf(kind: str, x: int) -> float:
    if x < 1:
        raise BadFrequency(f"frequency must be >= 1, got {x}")
    if kind == TF_BINARY:
        return 1.0
    if kind == TF_RAW:
        return float(x)
    if kind == TF_LOG:
        return math.log(x + 1)
    if kind == TF_SQUARED:
        return float(x * x)
    raise ValueError(f"unknown tf kind: {kind!r}")


def idf(kind: str, token: int, stats: CorpusStats | None) -> float:
    """Inverse-document-frequency factor, clamped below at EPSILON.

    Standard idf hits ln(1) = 0 for tokens present everywhere and
    probabilistic idf goes negative once a token appears in at least half
    the corpus; both are clamped so downstream weights stay positive.
    """
    if kind == IDF_UNARY:
        return 1.0
    if stats is None:
        raise UnknownToken(f"idf kind {kind!r} needs corpus stats")
    n_t = stats.doc_freq.get(token)
    if n_t is None:
        raise UnknownToken(f"token {token} absent from corpus stats")
    n = stats.num_texts
    if kind == IDF_STANDARD:
        raw = math.log(n / n_t)
    elif kind == IDF_SMOOTH:
        raw = math.log((n + n_t) / n_t) + 1.0
    elif kind == IDF_PROB:
        raw = math.log((n - n_t) / n_t) if n_t < n else float("-inf")
    else:
        raise ValueError(f"unknown idf kind: {kind!r}")
    return raw if raw > EPSILON else EPSILON


class WeightScheme:
    """A tf kind x idf kind pair bound to corpus stats.

    IDF values are cached per token because weight evaluation sits on the
    partitioning hot path. `unseen_doc_freq`, when set, supplies a
    document frequency for tokens missing from the stats (used for query
    tokens never seen at indexing time); otherwise such tokens raise
    UnknownToken.
    """

    def __init__(
        self,
        tf_kind: str = TF_RAW,
        idf_kind: str = IDF_UNARY,
        stats: CorpusStats | None = None,
        unseen_doc_freq: int | None = None,
    ) -> None:
        if tf_kind not in TF_KINDS:
            raise ValueError(f"unknown tf kind: {tf_kind!r}")
        if idf_kind not in IDF_KINDS:
            raise ValueError(f"unknown idf kind: {idf_kind!r}")
        if idf_kind != IDF_UNARY and stats is None:
            raise ValueError(f"idf kind {idf_kind!r} requires corpus stats")
        self.tf_kind = tf_kind
        self.idf_kind = idf_kind
        self.stats = stats
        self.unseen_doc_freq = unseen_doc_freq
        self._idf_cache: dict[int, float] = {}
        self._warned: set[int] = set()

    def idf_value(self, token: int) -> float:
        got = self._idf_cache.get(token)
        if got is not None:
            return got
        if (
            self.idf_kind != IDF_UNARY
            and self.stats is not None
            and token not in self.stats.doc_freq
            and self.unseen_doc_freq is not None
        ):
            patched = CorpusStats(
                num_texts=self.stats.num_texts,
                doc_freq={token: self.unseen_doc_freq},
            )
            got = idf(self.idf_kind, token, patched)
        else:
            got = idf(self.idf_kind, token, self.stats)
        if self.idf_kind == IDF_PROB and got == EPSILON and token not in self._warned:
            self._warned.add(token)
            log.warning("probabilistic idf clamped to epsilon for token %d", token)
        self._idf_cache[token] = got
        return got

    def weight(self, token: int, x: int) -> float:
        w = tf(self.tf_kind, x) * self.idf_value(token)
        return w if w > EPSILON else EPSILON

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightScheme)
            and self.tf_kind == other.tf_kind
            and self.idf_kind == other.idf_kind
        )

    def __repr__(self) -> str:
        return f"WeightScheme({self.tf_kind}, {self.idf_kind})"
