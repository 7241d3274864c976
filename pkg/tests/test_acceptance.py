"""The ten acceptance criteria, each at its stated tolerance.

A summary line per criterion is printed at the end of the run by the hook in
``conftest.py``.
"""

import itertools
import random
import time

import numpy as np
import pytest

from rei import bench, stats
from rei.baselines import InvertedIndex, SignatureIndex, query_inverted, query_signature
from rei.corpus import Corpus, Workload
from rei.grams import GramDictionary, generate_ngrams
from rei.index import BitVectorIndex, from_bytes, index_size_bytes, to_bytes
from rei.query import query_indexed, query_scan
from rei.selection import english_grams, select_bene, select_freq, select_grams, select_incr_bene
from rei.synthetic import needle_workload
from rei.tuner import build_model, estimate_score, index_size_bits, max_feasible_k

from helpers import (
    brute_bene,
    brute_freq,
    brute_incr_bene,
    direct_score,
    literal_grams,
    random_corpus,
    random_pattern,
    random_query_set,
    rng_for,
)

GIB = 1 << 30


def _dictionary(strategy, n, k, queries, lines):
    if strategy == "english":
        return english_grams(k)
    return select_grams(strategy, n, k, queries=queries, lines=Corpus(lines))


@pytest.mark.acceptance(1, "indexed, inverted and signature results equal a full scan")
def test_oracle_equivalence(record_property):
    combos = list(itertools.product((2, 3, 4), (4, 8, 16), (1, 4, 8), ("freq", "bene", "english")))
    trials_per_combo = 13
    rng = rng_for(1001)
    trials = checks = 0
    start = time.perf_counter()
    for n, k, m, strategy in combos:
        for _ in range(trials_per_combo):
            lines = random_corpus(rng, max_lines=200)
            queries = [random_pattern(rng, lines) for _ in range(rng.randint(1, 10))]
            corpus = Corpus(lines, m)
            dictionary = _dictionary(strategy, n, k, queries, lines)
            bv = BitVectorIndex(n=n, k=len(dictionary), m=m, dictionary=dictionary).fit(corpus)
            inv = InvertedIndex(dictionary, n=n, m=m).fit(corpus)
            sig = SignatureIndex(dictionary, n=n, m=m, w=64, seed=trials).fit(corpus)
            for q in queries:
                truth = query_scan(corpus, q).ids
                assert query_indexed(bv, corpus, q).ids == truth, (n, k, m, strategy, q)
                assert query_inverted(inv, corpus, q).ids == truth, (n, k, m, strategy, q)
                assert query_signature(sig, corpus, q).ids == truth, (n, k, m, strategy, q)
                checks += 1
            trials += 1
    elapsed = time.perf_counter() - start
    record_property("trials", trials)
    record_property("queries", checks)
    record_property("seconds", f"{elapsed:.1f}")
    assert trials >= 1000
    assert elapsed < 120


TABLE_SIZES_GIB = {4: 0.8, 8: 0.8, 16: 0.8, 32: 0.8, 64: 0.8, 96: 1.5, 128: 1.5,
                   192: 2.3, 256: 3.0, 320: 3.8, 384: 4.6, 448: 5.3, 512: 6.1}


@pytest.mark.acceptance(2, "index size in GiB within 0.06 of reference values")
def test_index_size_table(record_property):
    worst = 0.0
    for k, want in TABLE_SIZES_GIB.items():
        got = index_size_bytes(101_876_733, k, 1) / GIB
        worst = max(worst, abs(got - want))
        assert abs(got - want) <= 0.06, (k, got, want)
    record_property("max_abs_err_gib", f"{worst:.3f}")


@pytest.mark.acceptance(3, "Zipf anomaly probability in [0.235, 0.245]")
def test_zipf_probability(record_property):
    p = stats.zipf_trigram_anomaly_probability(26, 1.1)
    record_property("p", f"{p:.5f}")
    assert 0.235 <= p <= 0.245
    assert 1 - 0.24 ** 5 > 0.99


@pytest.mark.acceptance(4, "n-gram generation counts and the vmName case")
def test_ngram_generation():
    rng = random.Random(4)
    for _ in range(10_000):
        s = bytes(rng.randrange(32, 127) for _ in range(rng.randint(0, 30)))
        n = rng.randint(1, 6)
        total = sum(generate_ngrams(s, n).values())
        if not s:
            assert total == 0
        else:
            assert total == max(len(s) - n + 1, 1)
    assert set(generate_ngrams(b"vmName", 3)) == {b"vmN", b"mNa", b"Nam", b"ame"}


@pytest.mark.acceptance(5, "freq, bene and incr_bene match brute-force oracles")
def test_selection_oracles():
    rng = rng_for(5005)
    for _ in range(1000):
        queries = random_query_set(rng, 8)
        n = rng.choice((2, 3, 4))
        k = rng.randint(1, 12)
        assert list(select_freq(queries, n, k).grams) == brute_freq([q.encode() for q in queries], n, k)
    for select, oracle in ((select_bene, brute_bene), (select_incr_bene, brute_incr_bene)):
        for _ in range(100):
            lines = random_corpus(rng, 10, 20)
            queries = random_query_set(rng, 5, lines)
            k = rng.randint(1, 8)
            got = select(Workload(Corpus(lines), tuple(queries)), 2, k)
            assert list(got.grams) == oracle([q.encode() for q in queries], lines, 2, k)


@pytest.mark.acceptance(6, "pass rate monotone in k, group-OR law, signature dominates bit-vector")
def test_monotonicity(record_property):
    rng = rng_for(6006)
    violations = 0
    for _ in range(100):
        lines = random_corpus(rng, max_lines=200) or [b"a"]
        queries = random_query_set(rng, 8, lines)
        corpus = Corpus(lines)
        full = select_freq(queries, 2, 16)

        previous = None
        for k in range(len(full) + 1):
            d = GramDictionary(full.grams[:k])
            idx = BitVectorIndex(n=2, k=k, m=1, dictionary=d).fit(corpus)
            passed = [len(idx.filter(q)) for q in queries]
            if previous is not None:
                violations += sum(a > b for a, b in zip(passed, previous))
            previous = passed

        fine = BitVectorIndex(n=2, k=len(full), m=1, dictionary=full).fit(corpus).vectors_
        for m in (4, 8):
            coarse = BitVectorIndex(n=2, k=len(full), m=m, dictionary=full).fit(corpus).vectors_
            for g in range(coarse.shape[0]):
                ored = np.bitwise_or.reduce(fine[g * m:(g + 1) * m], axis=0)
                violations += int(not np.array_equal(ored, coarse[g]))

        for m in (1, 4):
            bv = BitVectorIndex(n=2, k=len(full), m=m, dictionary=full).fit(Corpus(lines, m))
            sig = SignatureIndex(full, n=2, m=m, w=64).fit(Corpus(lines, m))
            for q in queries:
                violations += int(len(sig.candidates(q)) < len(bv.filter(q)))
    record_property("violations", violations)
    assert violations == 0


@pytest.mark.acceptance(7, "tuner binary search equals linear scan; score within 1e-12")
def test_tuner_fidelity(record_property):
    rng = rng_for(7007)
    for _ in range(100):
        num_lines = rng.randint(1, 200_000)
        budget = rng.randint(0, 300 * num_lines)
        k_max = rng.randint(1, 512)
        for m in (1, 8, 32, 64, 128, 256, 512):
            linear = 0
            for k in range(1, k_max + 1):
                if index_size_bits(k, m, num_lines) <= budget:
                    linear = k
            assert max_feasible_k(budget, m, num_lines, k_max) == linear
    worst = 0.0
    trials = 0
    while trials < 100:
        lines = random_corpus(rng, max_lines=40, max_len=20) or [b"x"]
        queries = random_query_set(rng, 5, lines)
        if not any(literal_grams(q, 2) for q in queries):
            continue
        model = build_model(queries, lines, granularities=[1, 2, 8])
        for m in (1, 2, 8):
            want = direct_score(queries, lines, model.grams, m)
            got = estimate_score(model, model.grams, m)
            rel = abs(got - want) / abs(want) if want else abs(got)
            worst = max(worst, rel)
        trials += 1
    record_property("max_rel_err", f"{worst:.2e}")
    assert worst <= 1e-12


@pytest.mark.acceptance(8, "serialization roundtrips byte-identically and requeries exactly")
def test_serialization():
    rng = rng_for(8008)
    for _ in range(100):
        lines = random_corpus(rng, max_lines=150)
        queries = random_query_set(rng, 6, lines)
        n, k, m = rng.choice((2, 3, 4)), rng.choice((4, 8, 16, 64, 100)), rng.choice((1, 4, 8))
        corpus = Corpus(lines, m)
        dictionary = select_freq(queries, n, k)
        idx = BitVectorIndex(n=n, k=len(dictionary), m=m, dictionary=dictionary).fit(corpus)
        data = to_bytes(idx)
        back = from_bytes(data)
        assert to_bytes(back) == data
        assert back == idx
        for q in queries:
            assert query_indexed(back, corpus, q) == query_indexed(idx, corpus, q)


@pytest.mark.slow
@pytest.mark.acceptance(9, "needle workload: pass rate <= 1%, indexed time <= 0.5x scan")
def test_performance_smoke(record_property):
    lines, queries = needle_workload(1_000_000, 20, seed=0)
    corpus = Corpus(lines)
    dictionary = select_freq(queries, 2, 64)
    t0 = time.perf_counter()
    idx = BitVectorIndex(n=2, k=len(dictionary), m=1, dictionary=dictionary).fit(corpus)
    build_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    indexed = [query_indexed(idx, corpus, q) for q in queries]
    indexed_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    scanned = [query_scan(corpus, q) for q in queries]
    scan_s = time.perf_counter() - t0

    for a, b in zip(indexed, scanned):
        assert a.ids == b.ids
    pass_pct = 100.0 * sum(r.lines_scanned for r in indexed) / (len(lines) * len(queries))
    record_property("k", len(dictionary))
    record_property("pass_pct", f"{pass_pct:.4f}")
    record_property("build_s", f"{build_s:.2f}")
    record_property("indexed_s", f"{indexed_s:.3f}")
    record_property("scan_s", f"{scan_s:.3f}")
    assert len(dictionary) == 64
    assert pass_pct <= 1.0
    assert indexed_s <= 0.5 * scan_s


@pytest.mark.acceptance(10, "trimmed mean drops one min and one max")
def test_trimmed_mean():
    assert bench.trimmed_mean([1, 2, 3]) == 2
    assert bench.trimmed_mean([5, 5, 5, 5]) == 5
    assert bench.trimmed_mean([1, 2, 3, 100]) == 2.5
