"""Self-verification suites driven by the `walign verify` command.

Includes a fully hand-checkable worked example: a ten-token text over a
three-token alphabet with a lookup-table hash whose complete partition
(13 windows) was derived by tracing the algorithm by hand. Everything
the engine produces for this instance is known in advance, which makes
it a sharp regression anchor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import Text
from .hashing import KIND_ICWS, KIND_UNIVERSAL, FixedTableHash, sample_family
from .weights import WeightScheme
from .index import build
from .oracle import (
    brute_force_query,
    check_partition,
    minhash_grid,
    multiset_jaccard,
    sketch_of,
)
from .partition import (
    MODE_ACTIVE,
    MODE_ALL,
    generate_active_keys,
    generate_keys,
    monotonic_partitioning,
)
from .query import run_query

# --- worked example -------------------------------------------------------
# Tokens 0, 1, 2 (think A, B, C); the table below fixes every reachable
# (token, frequency) hash so the whole pipeline is hand-computable.

WORKED_TOKENS = (0, 1, 0, 1, 0, 0, 1, 1, 2, 2)
WORKED_TEXT = Text(0, WORKED_TOKENS)
WORKED_TABLE = {
    (0, 1): 2, (0, 2): 5, (0, 3): 8, (0, 4): 12,
    (1, 1): 9, (1, 2): 4, (1, 3): 16, (1, 4): 1,
    (2, 1): 3, (2, 2): 6,
}
WORKED_KEY_COUNT = 23
WORKED_ACTIVE_KEY_COUNT = 14
WORKED_VISIT_PREFIX = [(2, 8), (1, 1), (3, 3), (5, 5), (6, 6), (9, 9), (10, 10), (2, 4)]

# (value, a, b, c, d) in emission order, derived by hand-tracing the
# skyline algorithm over the visit order above.
WORKED_WINDOWS = [
    (1, 1, 2, 8, 10),
    (2, 1, 1, 1, 7),
    (2, 2, 3, 3, 7),
    (2, 3, 3, 8, 10),
    (2, 4, 5, 5, 10),
    (2, 6, 6, 6, 10),
    (3, 7, 9, 9, 10),
    (3, 10, 10, 10, 10),
    (4, 7, 7, 8, 8),
    (9, 2, 2, 2, 2),
    (9, 4, 4, 4, 4),
    (9, 7, 7, 7, 7),
    (9, 8, 8, 8, 8),
]


def worked_example_hash() -> FixedTableHash:
    return FixedTableHash(WORKED_TABLE)


@dataclass(slots=True)
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    problems: list[str] = field(default_factory=list)

    def record(self, ok: bool, problem: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if problem:
                self.problems.append(problem)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        state = "PASS" if self.ok else "FAIL"
        line = f"{self.name}: {state} ({self.passed} ok, {self.failed} failed)"
        for p in self.problems[:5]:
            line += f"\n  - {p}"
        if len(self.problems) > 5:
            line += f"\n  - ... {len(self.problems) - 5} more"
        return line


def golden_example_suite() -> SuiteReport:
    """Check every hand-derived fact about the worked example."""
    rep = SuiteReport("golden-example")
    fn = worked_example_hash()
    keys = generate_keys(WORKED_TEXT, fn)
    rep.record(len(keys) == WORKED_KEY_COUNT, f"expected {WORKED_KEY_COUNT} keys, got {len(keys)}")
    actives = generate_active_keys(WORKED_TEXT, fn)
    rep.record(
        len(actives) == WORKED_ACTIVE_KEY_COUNT,
        f"expected {WORKED_ACTIVE_KEY_COUNT} active keys, got {len(actives)}",
    )
    for mode in (MODE_ALL, MODE_ACTIVE):
        windows = monotonic_partitioning(WORKED_TEXT, fn, mode=mode)
        got = [(w.value, w.a, w.b, w.c, w.d) for w in windows]
        rep.record(got == WORKED_WINDOWS, f"{mode}: windows differ from the golden trace")
        grid = minhash_grid(WORKED_TEXT, fn)
        problems = check_partition(WORKED_TEXT, windows, grid)
        rep.record(not problems, f"{mode}: {problems[:3]}")
    return rep


def random_partition_suite(
    num_texts: int = 200,
    max_len: int = 60,
    alphabet: int = 6,
    seed: int = 7,
) -> SuiteReport:
    """Random texts: partitions must match the brute-force grid cell by
    cell in both modes, with identical window sets."""
    rep = SuiteReport("partition-vs-grid")
    rng = random.Random(seed)
    for case in range(num_texts):
        n = rng.randint(1, max_len)
        text = Text(case, tuple(rng.randrange(alphabet) for _ in range(n)))
        (fn,) = sample_family(KIND_UNIVERSAL, 1, rng.getrandbits(63))
        grid = minhash_grid(text, fn)
        active = monotonic_partitioning(text, fn, mode=MODE_ACTIVE)
        problems = check_partition(text, active, grid)
        rep.record(not problems, f"case {case}: {problems[:3]}")
        full = monotonic_partitioning(text, fn, mode=MODE_ALL)
        same = {(w.value, w.a, w.b, w.c, w.d) for w in full} == {
            (w.value, w.a, w.b, w.c, w.d) for w in active
        }
        rep.record(same, f"case {case}: modes disagree")
    return rep


def query_equivalence_suite(
    num_cases: int = 25,
    seed: int = 11,
) -> SuiteReport:
    """Engine answers must equal exhaustive brute force with shared hash
    functions, for both hash kinds across a spread of thresholds."""
    rep = SuiteReport("query-vs-brute-force")
    rng = random.Random(seed)
    thetas = (0.25, 0.5, 0.75, 1.0)
    for case in range(num_cases):
        kind = KIND_UNIVERSAL if case % 2 == 0 else KIND_ICWS
        k = rng.choice((4, 8, 16))
        texts = [
            Text(tid, tuple(rng.randrange(5) for _ in range(rng.randint(3, 30))))
            for tid in range(3)
        ]
        query = Text(-1, tuple(rng.randrange(5) for _ in range(rng.randint(1, 8))))
        idx = build(texts, k, rng.getrandbits(63), kind=kind)
        theta = thetas[case % len(thetas)]
        engine = run_query(idx, query, theta).cells()
        brute = brute_force_query(texts, query, theta, fns=idx.fns, scheme=idx.scheme)
        rep.record(
            engine == brute,
            f"case {case} ({kind}, k={k}, theta={theta}): engine {len(engine)} cells, "
            f"brute {len(brute)}",
        )
    return rep


def estimator_convergence_suite(trials: int = 6, k: int = 2000, seed: int = 23) -> SuiteReport:
    """Weighted sketch collision rates must approach the exact similarity.

    Uses the weighted sampler with raw-count weights, under which the
    weighted similarity equals multi-set Jaccard; the sampler's per-token
    randomness is fully independent, so the estimate is unbiased.
    """
    rep = SuiteReport("estimator-convergence")
    rng = random.Random(seed)
    for case in range(trials):
        t1 = Text(0, tuple(rng.randrange(4) for _ in range(rng.randint(2, 10))))
        t2 = Text(1, tuple(rng.randrange(4) for _ in range(rng.randint(2, 10))))
        exact = float(multiset_jaccard(t1, t2))
        fns = sample_family(KIND_ICWS, k, rng.getrandbits(63))
        scheme = WeightScheme()
        s1 = sketch_of(t1, fns, scheme)
        s2 = sketch_of(t2, fns, scheme)
        est = sum(1 for a, b in zip(s1, s2) if a == b) / k
        band = 3 * (exact * (1 - exact) / k) ** 0.5 + 1e-9
        rep.record(
            abs(est - exact) <= band,
            f"case {case}: estimate {est:.4f} vs exact {exact:.4f} (band {band:.4f})",
        )
    return rep


def run_all(
    num_texts: int = 200,
    seed: int = 7,
    query_cases: int = 25,
) -> list[SuiteReport]:
    return [
        golden_example_suite(),
        random_partition_suite(num_texts=num_texts, seed=seed),
        query_equivalence_suite(num_cases=query_cases, seed=seed + 4),
        estimator_convergence_suite(seed=seed + 16),
    ]
