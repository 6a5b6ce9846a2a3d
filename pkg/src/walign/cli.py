"""Command-line front end.

Subcommands: index (build + persist), query (run one query against a
saved index), stats (partition statistics without persisting), bench
(scaling measurements over n / f / k), verify (self-check suites).

Exit codes: 0 success, 1 verification failure, 2 usage or I/O trouble.
All randomness flows from --seed; given the echoed configuration every
command is deterministic.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time

from . import selfcheck
from .corpus import (
    TokenizerConfig,
    encode_query,
    ingest_corpus,
    read_jsonl,
)
from .errors import WalignError
from .hashing import KIND_ICWS, KIND_UNIVERSAL, sample_family
from .index import build, build_stats_sidecar, load, save
from .oracle import hard_case_text
from .partition import MODE_ACTIVE, MODE_ALL, monotonic_partitioning
from .query import longest_match, run_query
from .weights import IDF_UNARY, WeightScheme

_TF_FLAG = {"binary": "binary", "raw": "raw_count", "log": "logarithmic", "squared": "squared"}
_IDF_FLAG = {"unary": "unary", "standard": "standard", "smooth": "smooth", "prob": "probabilistic"}
_MODE_FLAG = {"active": MODE_ACTIVE, "all": MODE_ALL}


def _add_tokenizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=("whitespace", "qgram", "byte"), default="whitespace")
    p.add_argument("--gram", type=int, default=2, help="gram size for the qgram scheme")
    p.add_argument("--lowercase", action="store_true")


def _add_hash_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hash", choices=("universal", "icws"), default="universal")
    p.add_argument("--k", type=int, default=64, help="sketch size")
    p.add_argument("--seed", type=int, default=1, help="master seed")
    p.add_argument("--tf", choices=sorted(_TF_FLAG), default="raw")
    p.add_argument("--idf", choices=sorted(_IDF_FLAG), default="unary")
    p.add_argument("--mode", choices=("active", "all"), default="active")


def _tokenizer_from(args) -> TokenizerConfig:
    return TokenizerConfig(args.scheme, args.gram, args.lowercase)


def _echo_config(args, extra: dict | None = None) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    if extra:
        cfg.update(extra)
    return cfg


def _build_from_corpus(args):
    tok = _tokenizer_from(args)
    ingest = ingest_corpus(read_jsonl(args.corpus), tok)
    if not ingest.texts:
        raise WalignError(f"{args.corpus}: no usable texts")
    kind = KIND_UNIVERSAL if args.hash == "universal" else KIND_ICWS
    scheme = None
    if kind == KIND_ICWS:
        idf_kind = _IDF_FLAG[args.idf]
        stats = ingest.stats if idf_kind != IDF_UNARY else None
        scheme = WeightScheme(_TF_FLAG[args.tf], idf_kind, stats)
    start = time.perf_counter()
    idx = build(
        ingest.texts,
        args.k,
        args.seed,
        kind=kind,
        scheme=scheme,
        mode=_MODE_FLAG[args.mode],
        vocab=ingest.vocab,
        tokenizer=tok,
    )
    return ingest, idx, time.perf_counter() - start


def cmd_index(args) -> int:
    ingest, idx, seconds = _build_from_corpus(args)
    save(idx, args.out)
    sidecar = build_stats_sidecar(idx, ingest.texts, seconds)
    sidecar["config"] = _echo_config(args)
    sidecar["texts"] = len(ingest.texts)
    sidecar["skipped"] = ingest.skipped
    stats_path = args.stats_out or args.out + ".stats.json"
    with open(stats_path, "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"indexed {len(ingest.texts)} texts, {sidecar['windows_total']} windows -> {args.out}")
    return 0


def cmd_query(args) -> int:
    idx = load(args.index)
    if idx.vocab is None or idx.tokenizer is None:
        raise WalignError(f"{args.index}: index lacks a vocabulary; rebuild with walign index")
    query, _unseen = encode_query(args.q, idx.vocab, idx.tokenizer)
    result = run_query(idx, query, args.theta)
    out = sys.stdout
    for text_id in sorted(result.rects):
        for r in result.rects[text_id]:
            out.write(
                json.dumps(
                    {
                        "text_id": text_id,
                        "a": r.a,
                        "b": r.b,
                        "c": r.c,
                        "d": r.d,
                        "support_min": r.support_min,
                    }
                )
                + "\n"
            )
    if args.cells:
        for cell in sorted(result.cells()):
            out.write(json.dumps({"cell": list(cell)}) + "\n")
    if args.longest:
        for text_id, (i, j) in sorted(longest_match(result).items()):
            out.write(json.dumps({"longest": {"text_id": text_id, "i": i, "j": j}}) + "\n")
    return 0


def cmd_stats(args) -> int:
    ingest, idx, seconds = _build_from_corpus(args)
    sidecar = build_stats_sidecar(idx, ingest.texts, seconds)
    per_text: dict[int, int] = {}
    for lst in idx.lists:
        for ws in lst.values():
            for w in ws:
                per_text[w.text_id] = per_text.get(w.text_id, 0) + 1
    sidecar["windows_per_text"] = {str(t): c for t, c in sorted(per_text.items())}
    sidecar["config"] = _echo_config(args)
    json.dump(sidecar, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_bench(args) -> int:
    grid = [int(v) for v in args.grid.split(",")]
    modes = [MODE_ACTIVE, MODE_ALL] if args.mode == "both" else [_MODE_FLAG[args.mode]]
    writer = csv.writer(sys.stdout)
    writer.writerow(
        ["axis", "value", "mode", "seeds", "windows_mean", "seconds_median", "seconds_spread"]
    )
    for value in grid:
        n, f, k = args.n, args.f, args.k
        if args.axis == "n":
            n = value
        elif args.axis == "f":
            f = value
        else:
            k = value
        f = min(f, n)
        text = hard_case_text(n, f)
        for mode in modes:
            times, counts = [], []
            for s in range(args.seeds):
                fns = sample_family(KIND_UNIVERSAL, k, args.seed + 1000 * s + value)
                t0 = time.perf_counter()
                total = 0
                for fi, fn in enumerate(fns, start=1):
                    total += len(monotonic_partitioning(text, fn, mode=mode, fn_index=fi))
                times.append(time.perf_counter() - t0)
                counts.append(total)
            spread = (max(times) - min(times)) if len(times) > 1 else 0.0
            writer.writerow(
                [
                    args.axis,
                    value,
                    mode,
                    args.seeds,
                    f"{statistics.mean(counts):.1f}",
                    f"{statistics.median(times):.6f}",
                    f"{spread:.6f}",
                ]
            )
    return 0


def cmd_verify(args) -> int:
    reports = selfcheck.run_all(num_texts=args.texts, seed=args.seed, query_cases=args.query_cases)
    ok = True
    for rep in reports:
        print(rep.summary())
        ok = ok and rep.ok
    print("verify:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index from a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats-out", default=None)
    _add_tokenizer_flags(p)
    _add_hash_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="query a saved index")
    p.add_argument("--index", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--q", required=True, help="query text")
    p.add_argument("--cells", action="store_true", help="also list individual cells")
    p.add_argument("--longest", action="store_true", help="also report longest match per text")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="partition statistics for a corpus (no files written)")
    p.add_argument("--corpus", required=True)
    _add_tokenizer_flags(p)
    _add_hash_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="scaling benchmark on synthetic block texts")
    p.add_argument("--axis", choices=("n", "f", "k"), required=True)
    p.add_argument("--grid", required=True, help="comma-separated values for the axis")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--f", type=int, default=100)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=("active", "all", "both"), default="active")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--texts", type=int, default=200)
    p.add_argument("--query-cases", type=int, default=25)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WalignError, OSError, ValueError) as exc:
        print(f"walign: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
