import random

import pytest

from walign.corpus import TokenizerConfig, ingest_corpus
from walign.errors import CorruptIndex, UnsupportedVersion
from walign.hashing import KIND_ICWS, KIND_UNIVERSAL
from walign.index import build, load, lookup, save
from walign.oracle import minhash_grid
from walign.partition import MODE_ALL, monotonic_partitioning
from walign.weights import WeightScheme

from conftest import random_text


def test_build_worked_index(worked_text, worked_fn):
    idx = build([worked_text], 1, 0, fns=[worked_fn])
    assert idx.total_windows() == 13
    assert sorted(idx.lists[0].keys()) == [1, 2, 3, 4, 9]


def test_lookup_worked_values(worked_text, worked_fn):
    idx = build([worked_text], 1, 0, fns=[worked_fn])
    ws = lookup(idx, 1, 1)
    assert [(w.value, w.a, w.b, w.c, w.d) for w in ws] == [(1, 1, 2, 8, 10)]
    assert lookup(idx, 1, 777) == []
    with pytest.raises(ValueError):
        lookup(idx, 2, 1)


def test_lookup_sizes_sum_to_total(worked_text, worked_fn):
    idx = build([worked_text], 1, 0, fns=[worked_fn])
    assert sum(len(lookup(idx, 1, v)) for v in idx.lists[0]) == idx.total_windows()


def test_two_identical_fns_double_population(worked_text, worked_fn):
    one = build([worked_text], 1, 0, fns=[worked_fn])
    two = build([worked_text], 2, 0, fns=[worked_fn, worked_fn])
    assert two.total_windows() == 2 * one.total_windows()
    assert two.windows_per_fn() == [13, 13]


def test_window_conservation_random():
    rng = random.Random(8)
    texts = [random_text(rng, 30, 4, text_id=i) for i in range(5)]
    k = 3
    idx = build(texts, k, 321)
    expected = sum(
        len(monotonic_partitioning(t, fn, fn_index=i + 1))
        for t in texts
        for i, fn in enumerate(idx.fns)
    )
    assert idx.total_windows() == expected


def test_stored_windows_satisfy_definition():
    rng = random.Random(9)
    texts = [random_text(rng, 20, 3, text_id=i) for i in range(3)]
    idx = build(texts, 2, 77)
    by_text = {t.text_id: t for t in texts}
    for fi, lst in enumerate(idx.lists):
        for v, ws in lst.items():
            for w in ws:
                grid = minhash_grid(by_text[w.text_id], idx.fns[fi])
                for i in range(w.a, w.b + 1):
                    for j in range(w.c, w.d + 1):
                        assert grid.value(i, j) == v


def test_per_list_windows_sorted():
    rng = random.Random(10)
    texts = [random_text(rng, 25, 2, text_id=i) for i in range(4)]
    idx = build(texts, 2, 5)
    for lst in idx.lists:
        for ws in lst.values():
            keys = [(w.text_id, w.a, w.c) for w in ws]
            assert keys == sorted(keys)


def corpus_index(tmp_path, kind=KIND_ICWS, k=8, seed=4242, idf="smooth"):
    records = [(i, f"tok{j % 5} tok{(j + i) % 7} shared" * (1 + i % 2)) for i, j in zip(range(10), range(10))]
    res = ingest_corpus(records, TokenizerConfig())
    scheme = None
    if kind == KIND_ICWS:
        scheme = WeightScheme("raw_count", idf, res.stats if idf != "unary" else None)
    idx = build(
        res.texts, k, seed, kind=kind, scheme=scheme, vocab=res.vocab, tokenizer=TokenizerConfig()
    )
    path = tmp_path / "t.idx"
    save(idx, str(path))
    return idx, path


def test_roundtrip_universal(tmp_path, worked_text):
    idx = build([worked_text], 3, 99, kind=KIND_UNIVERSAL)
    path = tmp_path / "u.idx"
    save(idx, str(path))
    assert load(str(path)) == idx


def test_roundtrip_icws_with_vocab_and_stats(tmp_path):
    idx, path = corpus_index(tmp_path)
    back = load(str(path))
    assert back.kind == idx.kind and back.k == idx.k
    assert back.fns == idx.fns
    assert back.lists == idx.lists
    assert back.vocab == idx.vocab
    assert back.tokenizer == idx.tokenizer
    assert back.scheme == idx.scheme
    assert back.scheme.stats.doc_freq == idx.scheme.stats.doc_freq
    assert back.scheme.stats.num_texts == idx.scheme.stats.num_texts


def test_rebuild_is_byte_identical(tmp_path):
    _, p1 = corpus_index(tmp_path)
    p2 = tmp_path / "again.idx"
    idx2, _ = corpus_index(tmp_path)
    save(idx2, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_truncated_file_rejected(tmp_path):
    _, path = corpus_index(tmp_path)
    blob = path.read_bytes()
    path.write_bytes(blob[: len(blob) // 2])
    with pytest.raises(CorruptIndex):
        load(str(path))


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.idx"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(CorruptIndex):
        load(str(path))


def test_flipped_byte_rejected(tmp_path):
    _, path = corpus_index(tmp_path)
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptIndex):
        load(str(path))


def test_unknown_version_rejected(tmp_path):
    import hashlib
    import struct

    _, path = corpus_index(tmp_path)
    blob = bytearray(path.read_bytes()[:-8])
    blob[4:6] = struct.pack("<H", 9)
    blob = bytes(blob)
    path.write_bytes(blob + hashlib.blake2b(blob, digest_size=8).digest())
    with pytest.raises(UnsupportedVersion):
        load(str(path))


def test_build_rejects_bad_inputs(worked_text):
    with pytest.raises(ValueError):
        build([], 1, 0)
    with pytest.raises(ValueError):
        build([worked_text], 1, 0, mode="sideways")
    with pytest.raises(ValueError):
        build([worked_text], 1, 0, kind=KIND_UNIVERSAL, scheme=WeightScheme())


def test_all_keys_mode_build(worked_text, worked_fn):
    idx = build([worked_text], 1, 0, fns=[worked_fn], mode=MODE_ALL)
    assert idx.total_windows() == 13


def test_threaded_build_matches_sequential(monkeypatch, worked_text):
    idx_seq = build([worked_text], 4, 11)
    monkeypatch.setenv("WALIGN_THREADS", "4")
    idx_par = build([worked_text], 4, 11)
    assert idx_seq == idx_par
