"""Hash families for min-hash sketching.

Two families share one value abstraction with equality and a strict total
order:

* universal integer hashing over (token, frequency) pairs for the
  multi-set case — values are plain ints in [0, p-1] with p = 2^61 - 1;
* improved consistent weighted sampling (ICWS) over (token, weight)
  pairs for the weighted case — values are (t, z, a) triples ordered by
  the real component `a`, equal iff (t, z) match.

All randomness is derived from explicit 64-bit seeds through a
counter-based splitmix generator, so functions are fully reproducible
and serializable from their parameters alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadFrequency, BadWeight

MERSENNE_P = (1 << 61) - 1
_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 increment


def _splitmix64(x: int) -> int:
    x = (x + _GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _stream_u64(seed: int, *lanes: int) -> int:
    """One deterministic 64-bit draw keyed by (seed, *lanes)."""
    x = _splitmix64(seed & _MASK64)
    for lane in lanes:
        x = _splitmix64(x ^ (lane & _MASK64))
    return x


def _unit_open(u64: int) -> float:
    # strictly inside (0, 1) so logs are finite
    return ((u64 >> 11) + 0.5) * 2.0**-53


def _unit_halfopen(u64: int) -> float:
    # [0, 1)
    return (u64 >> 11) * 2.0**-53


def _uniform_below(bound: int, seed: int, lane: int) -> int:
    """Uniform integer in [0, bound) by rejection over whole multiples."""
    limit = (1 << 64) - ((1 << 64) % bound)
    ctr = 0
    while True:
        u = _stream_u64(seed, lane, ctr)
        if u < limit:
            return u % bound
        ctr += 1


@dataclass(frozen=True, slots=True)
class UniversalHashFn:
    """h(t, x) = (a1*t + a2*x + b) mod p with a1, a2 != 0."""

    a1: int
    a2: int
    b: int

    def __post_init__(self) -> None:
        for name in ("a1", "a2"):
            v = getattr(self, name)
            if not 1 <= v <= MERSENNE_P - 1:
                raise ValueError(f"{name} must be in [1, p-1]")
        if not 0 <= self.b <= MERSENNE_P - 1:
            raise ValueError("b must be in [0, p-1]")

    def evaluate(self, token: int, freq: int) -> int:
        if freq < 1:
            raise BadFrequency(f"frequency must be >= 1, got {freq}")
        return (self.a1 * token + self.a2 * freq + self.b) % MERSENNE_P


class RandomOracleHash:
    """Idealized random hash: independent uniform value per (token, freq).

    The affine universal family is only pairwise independent, and for a
    fixed token its values over growing frequencies form an arithmetic
    progression mod p whose running-minimum statistics measurably deviate
    from those of independent draws. Statistical laws stated for random
    hash functions (harmonic active-hash counts, estimator unbiasedness)
    are therefore validated against this class instead. Not serializable
    into index files; test and verification use only.
    """

    __slots__ = ("seed",)

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK64

    def evaluate(self, token: int, freq: int) -> int:
        if freq < 1:
            raise BadFrequency(f"frequency must be >= 1, got {freq}")
        return _stream_u64(self.seed, token, freq) % MERSENNE_P

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RandomOracleHash) and self.seed == other.seed


def random_oracle_family(k: int, master_seed: int) -> list[RandomOracleHash]:
    return [RandomOracleHash(_stream_u64(master_seed, 0x0A0E, i)) for i in range(k)]


class FixedTableHash:
    """Universal-interface hash backed by an explicit (token, freq) table.

    Used by tests and the self-check suite, where a fully hand-computable
    hash makes the expected partition derivable by hand. Not serializable.
    """

    def __init__(self, table: dict[tuple[int, int], int]) -> None:
        self.table = dict(table)

    def evaluate(self, token: int, freq: int) -> int:
        if freq < 1:
            raise BadFrequency(f"frequency must be >= 1, got {freq}")
        try:
            return self.table[(token, freq)]
        except KeyError:
            raise KeyError(f"no table entry for token={token} freq={freq}") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FixedTableHash) and self.table == other.table


class IcwsValue:
    """Weighted-sample value (t, z, a).

    Equality is exact on the integer pair (t, z); z determines y (and a)
    for a fixed function, so this matches equality on (t, y) without any
    float comparison. Ordering is by `a` with a (t, z) tie-break, making
    the order strict and total even under real-value ties. Values are
    only comparable within one hash function, which is how the engine
    uses them: every inverted list belongs to a single function.
    """

    __slots__ = ("t", "z", "a")

    def __init__(self, t: int, z: int, a: float) -> None:
        self.t = t
        self.z = z
        self.a = a

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IcwsValue):
            return NotImplemented
        return self.t == other.t and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.t, self.z))

    def __lt__(self, other: "IcwsValue") -> bool:
        if self.a != other.a:
            return self.a < other.a
        return (self.t, self.z) < (other.t, other.z)

    def __le__(self, other: "IcwsValue") -> bool:
        return self == other or self < other

    def __gt__(self, other: "IcwsValue") -> bool:
        return other < self

    def __ge__(self, other: "IcwsValue") -> bool:
        return other <= self

    def __repr__(self) -> str:
        return f"IcwsValue(t={self.t}, z={self.z}, a={self.a!r})"


HashValue = int | IcwsValue


class IcwsHashFn:
    """One improved-consistent-weighted-sampling function.

    Per-token parameters r_t, c_t ~ Gamma(2,1) and beta_t ~ Uniform[0,1)
    are derived lazily from (seed, token id), so memory stays O(1) per
    function regardless of vocabulary size. Gamma(2,1) is sampled exactly
    as the sum of two Exponential(1) draws.
    """

    __slots__ = ("seed", "_params")

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK64
        self._params: dict[int, tuple[float, float, float]] = {}

    def _token_params(self, token: int) -> tuple[float, float, float]:
        got = self._params.get(token)
        if got is None:
            u = [_stream_u64(self.seed, token, i) for i in range(5)]
            r = -math.log(_unit_open(u[0])) - math.log(_unit_open(u[1]))
            c = -math.log(_unit_open(u[2])) - math.log(_unit_open(u[3]))
            beta = _unit_halfopen(u[4])
            got = (r, c, beta)
            self._params[token] = got
        return got

    def evaluate(self, token: int, weight: float) -> IcwsValue:
        if weight <= 0:
            raise BadWeight(f"weight must be positive, got {weight}")
        r, c, beta = self._token_params(token)
        z = math.floor(math.log(weight) / r + beta)
        y = math.exp(r * (z - beta))  # y <= weight by construction
        a = c / (y * math.exp(r))
        return IcwsValue(token, z, a)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IcwsHashFn) and self.seed == other.seed

    def __repr__(self) -> str:
        return f"IcwsHashFn(seed={self.seed:#x})"


KIND_UNIVERSAL = "universal"
KIND_ICWS = "icws"


def sample_family(kind: str, k: int, master_seed: int):
    """Draw k independent hash functions, fully determined by master_seed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if kind == KIND_UNIVERSAL:
        fns = []
        for i in range(k):
            fn_seed = _stream_u64(master_seed, 0x755E, i)
            a1 = 1 + _uniform_below(MERSENNE_P - 1, fn_seed, 1)
            a2 = 1 + _uniform_below(MERSENNE_P - 1, fn_seed, 2)
            b = _uniform_below(MERSENNE_P, fn_seed, 3)
            fns.append(UniversalHashFn(a1, a2, b))
        return fns
    if kind == KIND_ICWS:
        return [IcwsHashFn(_stream_u64(master_seed, 0x1C35, i)) for i in range(k)]
    raise ValueError(f"unknown hash family kind: {kind!r}")
