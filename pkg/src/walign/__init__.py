"""Near-duplicate text alignment via compact-window min-hash indexes."""

from .corpus import (
    CorpusStats,
    IngestResult,
    Text,
    TokenizerConfig,
    Vocabulary,
    encode_query,
    ingest_corpus,
    read_jsonl,
    token_freq,
    tokenize,
)
from .hashing import (
    KIND_ICWS,
    KIND_UNIVERSAL,
    FixedTableHash,
    HashValue,
    IcwsHashFn,
    IcwsValue,
    UniversalHashFn,
    sample_family,
)
from .index import InvertedIndex, build, load, lookup, save
from .partition import (
    MODE_ACTIVE,
    MODE_ALL,
    CompactWindow,
    Key,
    Skyline,
    generate_active_keys,
    generate_keys,
    key_visit_order,
    monotonic_partitioning,
)
from .query import MatchRect, QueryResult, longest_match, plane_sweep, run_query
from .weights import WeightScheme

__version__ = "0.1.0"

__all__ = [
    "CompactWindow",
    "CorpusStats",
    "FixedTableHash",
    "HashValue",
    "IcwsHashFn",
    "IcwsValue",
    "IngestResult",
    "InvertedIndex",
    "Key",
    "KIND_ICWS",
    "KIND_UNIVERSAL",
    "MatchRect",
    "MODE_ACTIVE",
    "MODE_ALL",
    "QueryResult",
    "Skyline",
    "Text",
    "TokenizerConfig",
    "UniversalHashFn",
    "Vocabulary",
    "WeightScheme",
    "build",
    "encode_query",
    "generate_active_keys",
    "generate_keys",
    "ingest_corpus",
    "key_visit_order",
    "load",
    "longest_match",
    "lookup",
    "monotonic_partitioning",
    "plane_sweep",
    "read_jsonl",
    "run_query",
    "sample_family",
    "save",
    "token_freq",
    "tokenize",
]
