"""Exception types shared across the package."""


class WalignError(Exception):
    """Base class for all walign errors."""


class EmptyText(WalignError):
    """Raised when tokenization produces no tokens."""


class BoundsError(WalignError):
    """Raised for out-of-range 1-based subsequence bounds."""


class DuplicateId(WalignError):
    """Raised when two corpus records share a text id."""


class BadFrequency(WalignError):
    """Raised when a token frequency of zero (or less) is hashed or weighted."""


class BadWeight(WalignError):
    """Raised when a non-positive weight reaches the weighted hash."""


class UnknownToken(WalignError):
    """Raised when a non-unary IDF is evaluated for a token absent from the corpus stats."""


class CapExceeded(WalignError):
    """Raised when a brute-force oracle computation would exceed its size cap."""


class BadParams(WalignError):
    """Raised for invalid synthetic-text generator parameters."""


class CorruptIndex(WalignError):
    """Raised when an index file fails magic, structure, or checksum validation."""


class UnsupportedVersion(WalignError):
    """Raised when an index file declares a format version we cannot read."""


class EmptyQuery(WalignError):
    """Raised when a query tokenizes to nothing."""
