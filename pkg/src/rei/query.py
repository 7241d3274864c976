"""Answering regex queries: mask, group filter, then exact matching."""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _scan
from ._validation import as_bytes, check_lines, check_positive_int
from .grams import required_literals

ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class ExactMatcher(ABC):
    """Decides whether a pattern matches anywhere in a line."""

    @abstractmethod
    def matches(self, pattern, text):
        ...

    def searcher(self, pattern):
        """A one-argument predicate for ``pattern``; override to precompile."""
        return lambda text: self.matches(pattern, text)


class ReMatcher(ExactMatcher):
    """Backed by the standard library ``re`` engine on bytes."""

    def __init__(self, flags=0):
        self.flags = flags

    @lru_cache(maxsize=1024)
    def _compiled(self, pattern):
        return re.compile(pattern, self.flags)

    def matches(self, pattern, text):
        return self._compiled(as_bytes(pattern)).search(text) is not None

    def searcher(self, pattern):
        search = self._compiled(as_bytes(pattern)).search
        return lambda text: search(text) is not None


DEFAULT_MATCHER = ReMatcher()


@dataclass
class QueryResult:
    ids: list = field(default_factory=list)
    groups_passed: int = 0
    lines_scanned: int = 0
    lines_matched: int = 0

    def __post_init__(self):
        self.lines_matched = len(self.ids)


@dataclass(frozen=True, eq=False)
class QueryMask:
    """``k`` mask bits packed like index vectors; padding bits are 1.

    Bit ``i`` is 1 when dictionary gram ``i`` is not required by the query.
    """

    words: np.ndarray
    k: int

    def bits(self):
        """Low ``k`` bits as a string, offset 0 leftmost."""
        row = _scan.unpack_rows(self.words.reshape(1, -1), self.k)[0]
        return "".join("1" if b else "0" for b in row)

    def __eq__(self, other):
        if not isinstance(other, QueryMask):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.words, other.words)


def required_offsets(pattern, dictionary, n):
    """Offsets of dictionary grams that occur in a required literal of length >= n."""
    check_positive_int(n, "n")
    literals = [lit for lit in required_literals(pattern) if len(lit) >= n]
    if not literals:
        return []
    return [i for i, g in enumerate(dictionary) if any(g in lit for lit in literals)]


def make_mask(pattern, dictionary, n):
    k = len(dictionary)
    present = np.zeros((1, k), dtype=bool)
    present[0, required_offsets(pattern, dictionary, n)] = True
    words = ~_scan.pack_rows(present, k)[0]
    return QueryMask(words.astype(np.uint64), k)


def filter_groups(index, mask):
    """Ascending ids of groups whose vector OR the mask is all ones."""
    k = len(index.dictionary_)
    if mask.k != k:
        raise ValueError(f"mask has {mask.k} bits but the index has k={k}")
    vectors = index.vectors_
    if vectors.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    passing = np.logical_and.reduce((vectors | mask.words) == ALL_ONES, axis=1)
    return np.flatnonzero(passing)


def _scan_groups(texts, groups, m, pattern, matcher):
    search = matcher.searcher(as_bytes(pattern))
    ids = []
    scanned = 0
    total = len(texts)
    if m == 1:
        for i in groups.tolist():
            if search(texts[i]):
                ids.append(i)
        scanned = len(groups)
    else:
        for g in groups.tolist():
            start = g * m
            stop = min(start + m, total)
            scanned += stop - start
            for i in range(start, stop):
                if search(texts[i]):
                    ids.append(i)
    return QueryResult(ids=ids, groups_passed=len(groups), lines_scanned=scanned)


def check_pairing(index, corpus):
    texts = check_lines(corpus)
    if len(texts) != index.n_lines_:
        raise ValueError(f"index was built over {index.n_lines_} lines, corpus has {len(texts)}")
    granularity = getattr(corpus, "granularity", index.m)
    if granularity != index.m:
        raise ValueError(f"corpus granularity {granularity} != index m {index.m}")
    return texts


def query_indexed(index, corpus, pattern, matcher=None):
    texts = check_pairing(index, corpus)
    groups = filter_groups(index, make_mask(pattern, index.dictionary_, index.n))
    return _scan_groups(texts, groups, index.m, pattern, matcher or DEFAULT_MATCHER)


def query_scan(corpus, pattern, matcher=None):
    texts = check_lines(corpus)
    groups = np.arange(len(texts))
    result = _scan_groups(texts, groups, 1, pattern, matcher or DEFAULT_MATCHER)
    result.groups_passed = getattr(corpus, "num_groups", len(texts))
    return result
