"""Timing and filter-rate measurements for index configurations."""

import csv
import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._validation import check_lines, check_positive_int, check_queries
from .baselines import InvertedIndex, SignatureIndex
from .index import BitVectorIndex, index_size_bytes
from .query import DEFAULT_MATCHER, query_scan
from .selection import select_grams

logger = logging.getLogger(__name__)

KINDS = ("bitvector", "inverted", "signature", "none")
CSV_HEADER = ("kind", "n", "k", "m", "build_s", "index_bytes", "match_s", "pass_pct")


class BenchCorrectnessError(AssertionError):
    """An index returned a different line set than a full scan."""


def trimmed_mean(samples):
    """Mean after dropping exactly one largest and one smallest sample."""
    samples = sorted(samples)
    if len(samples) < 3:
        raise ValueError("trimmed mean needs at least 3 samples")
    core = samples[1:-1]
    return sum(core) / len(core)


@dataclass
class BenchRecord:
    kind: str
    n: int
    k: int
    m: int
    build_s: float
    index_bytes: int
    match_s: float
    pass_pct: float
    parallel: bool = False

    def row(self):
        return (
            self.kind, self.n, self.k, self.m,
            f"{self.build_s:.6f}", self.index_bytes, f"{self.match_s:.6f}", f"{self.pass_pct:.4f}",
        )


def _signature_width(k):
    return 64 if k <= 64 else 128


def build_for(kind, texts, queries, n, k, m, strategy="freq", dictionary=None, ranking=None):
    """Select grams and build one index; returns ``(index, bytes)``. ``none`` returns ``(None, 0)``."""
    if kind == "none":
        return None, 0
    if dictionary is None:
        dictionary = select_grams(strategy, n, k, queries=queries, lines=texts, ranking=ranking)
    if kind == "bitvector":
        index = BitVectorIndex(n=n, k=len(dictionary), m=m, dictionary=dictionary).fit(texts)
        return index, index_size_bytes(len(texts), len(dictionary), m)
    if kind == "inverted":
        index = InvertedIndex(dictionary, n=n, m=m).fit(texts)
        return index, index.nbytes_
    if kind == "signature":
        index = SignatureIndex(dictionary, n=n, m=m, w=_signature_width(len(dictionary))).fit(texts)
        return index, index.nbytes_
    raise ValueError(f"unknown index kind {kind!r}; expected one of {KINDS}")


def run_workload(workload, kind="bitvector", n=2, k=64, m=1, runs=10, strategy="freq",
                 dictionary=None, ranking=None, matcher=None, parallel=False, truth=None):
    """Build once, check every query against a full scan, then time ``runs`` passes."""
    check_positive_int(runs, "runs", minimum=3)
    texts = check_lines(workload.corpus)
    queries = check_queries(workload.queries)
    matcher = matcher or DEFAULT_MATCHER

    t0 = time.perf_counter()
    index, nbytes = build_for(kind, texts, queries, n, k, m, strategy, dictionary, ranking)
    build_s = time.perf_counter() - t0

    def answer(q):
        if index is None:
            return query_scan(texts, q, matcher)
        return index.search(texts, q, matcher)

    if truth is None:
        truth = [query_scan(texts, q, matcher).ids for q in queries]
    results = [answer(q) for q in queries]
    for q, expected, got in zip(queries, truth, results):
        if got.ids != expected:
            raise BenchCorrectnessError(f"{kind} n={n} k={k} m={m}: wrong result for {q!r}")

    total = len(texts)
    if total and queries:
        pass_pct = 100.0 * sum(r.lines_scanned for r in results) / (total * len(queries))
    else:
        pass_pct = 100.0

    timings = []
    for _ in range(runs):
        start = time.perf_counter()
        if parallel:
            with ThreadPoolExecutor() as pool:
                list(pool.map(answer, queries))
        else:
            for q in queries:
                answer(q)
        timings.append(time.perf_counter() - start)

    if index is None:
        n = k = 0
        m = 1
    else:
        k = len(index.dictionary_)
    return BenchRecord(kind, n, k, m, build_s, nbytes, trimmed_mean(timings), pass_pct, parallel)


@dataclass
class SweepResult:
    records: list
    failures: list


def sweep(workload, ns=(2,), ks=(64,), ms=(1,), kinds=("bitvector",), runs=10, strategy="freq",
          ranking=None, matcher=None, parallel=False):
    """Cross product of configurations; failures are collected and the sweep continues."""
    if not (ns and ks and ms and kinds):
        raise ValueError("every sweep axis needs at least one value")
    texts = check_lines(workload.corpus)
    queries = check_queries(workload.queries)
    truth = [query_scan(texts, q, matcher).ids for q in queries]
    seen = set()
    records, failures = [], []
    for kind, n, k, m in itertools.product(kinds, ns, ks, ms):
        key = (kind,) if kind == "none" else (kind, n, k, m)
        if key in seen:
            continue
        seen.add(key)
        try:
            records.append(run_workload(
                workload, kind, n, k, m, runs=runs, strategy=strategy, ranking=ranking,
                matcher=matcher, parallel=parallel, truth=truth,
            ))
        except Exception as exc:
            logger.warning("configuration %s failed: %s", key, exc)
            failures.append((key, exc))
    return SweepResult(records, failures)


def write_csv(records, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.row())
