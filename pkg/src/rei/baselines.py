"""Comparison indexes over the same grams: posting lists and signature files."""

import mmh3
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _scan
from ._validation import check_lines, check_positive_int
from .grams import GramDictionary
from .query import DEFAULT_MATCHER, _scan_groups, check_pairing, required_offsets

POSTING_ENTRY_BYTES = 4
SIGNATURE_WIDTHS = (64, 128)


def intersect_sorted(a, b):
    """Ascending merge intersection of two sorted, duplicate-free sequences."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


class _GramIndex(BaseEstimator):
    def _fit_common(self, X):
        check_positive_int(self.n, "n")
        check_positive_int(self.m, "m")
        texts = check_lines(X)
        dictionary = self.dictionary if isinstance(self.dictionary, GramDictionary) else GramDictionary(self.dictionary)
        self.dictionary_ = dictionary
        self.n_lines_ = len(texts)
        self.num_groups_ = -(-len(texts) // self.m)
        return _scan.group_presence(texts, dictionary.grams, self.m)

    def search(self, X, pattern, matcher=None):
        check_is_fitted(self, "dictionary_")
        texts = check_pairing(self, X)
        groups = self.candidates(pattern)
        return _scan_groups(texts, groups, self.m, pattern, matcher or DEFAULT_MATCHER)


class InvertedIndex(_GramIndex):
    """Gram -> ascending ids of groups containing it.

    Attributes
    ----------
    postings_ : dict of bytes -> list of int
    """

    def __init__(self, dictionary=(), n=2, m=1):
        self.dictionary = dictionary
        self.n = n
        self.m = m

    def fit(self, X, y=None):
        presence = self._fit_common(X)
        self.postings_ = {
            g: np.flatnonzero(presence[:, j]).tolist()
            for j, g in enumerate(self.dictionary_.grams)
        }
        return self

    def candidates(self, pattern):
        grams = [self.dictionary_.grams[i] for i in required_offsets(pattern, self.dictionary_, self.n)]
        if not grams:
            return np.arange(self.num_groups_)
        lists = sorted((self.postings_[g] for g in grams), key=len)
        result = lists[0]
        for other in lists[1:]:
            if not result:
                break
            result = intersect_sorted(result, other)
        return np.asarray(result, dtype=np.int64)

    @property
    def nbytes_(self):
        """Key bytes plus posting entries only."""
        check_is_fitted(self, "postings_")
        keys = sum(len(g) for g in self.postings_)
        entries = sum(len(p) for p in self.postings_.values())
        return keys + entries * POSTING_ENTRY_BYTES


def gram_signature(gram, w, h, seed):
    """Python int with up to ``h`` of ``w`` bits set, from seeded 64-bit MurmurHash3."""
    sig = 0
    for j in range(h):
        value = mmh3.hash64(gram, seed + j, signed=False)[0]
        sig |= 1 << (value % w)
    return sig


def _sig_words(sig, w):
    return np.array([(sig >> (64 * i)) & 0xFFFFFFFFFFFFFFFF for i in range(w // 64)], dtype=np.uint64)


class SignatureIndex(_GramIndex):
    """Superimposed-coding signature per group.

    Each gram hashes to ``h`` of ``w`` bit positions; a group's signature is
    the OR over the grams it contains.

    Attributes
    ----------
    signatures_ : ndarray of uint64, shape (num_groups, w // 64)
    """

    def __init__(self, dictionary=(), n=2, m=1, w=64, h=1, seed=0):
        self.dictionary = dictionary
        self.n = n
        self.m = m
        self.w = w
        self.h = h
        self.seed = seed

    def fit(self, X, y=None):
        if self.w not in SIGNATURE_WIDTHS:
            raise ValueError(f"w must be one of {SIGNATURE_WIDTHS}, got {self.w}")
        check_positive_int(self.h, "h")
        presence = self._fit_common(X)
        self.gram_signatures_ = np.array(
            [_sig_words(gram_signature(g, self.w, self.h, self.seed), self.w) for g in self.dictionary_.grams],
            dtype=np.uint64,
        ).reshape(-1, self.w // 64)
        sigs = np.zeros((presence.shape[0], self.w // 64), dtype=np.uint64)
        for j in range(presence.shape[1]):
            rows = presence[:, j]
            if rows.any():
                sigs[rows] |= self.gram_signatures_[j]
        self.signatures_ = sigs
        return self

    def query_signature(self, pattern):
        words = np.zeros(self.w // 64, dtype=np.uint64)
        for i in required_offsets(pattern, self.dictionary_, self.n):
            words |= self.gram_signatures_[i]
        return words

    def candidates(self, pattern):
        q = self.query_signature(pattern)
        if self.signatures_.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        passing = np.logical_and.reduce((self.signatures_ & q) == q, axis=1)
        return np.flatnonzero(passing)

    @property
    def nbytes_(self):
        return int(self.signatures_.nbytes)


def build_inverted(corpus, dictionary, config):
    granularity = getattr(corpus, "granularity", config.m)
    if granularity != config.m:
        raise ValueError(f"corpus granularity {granularity} != config.m {config.m}")
    if len(dictionary) != config.k:
        raise ValueError(f"dictionary holds {len(dictionary)} grams but config.k={config.k}")
    return InvertedIndex(GramDictionary(dictionary), n=config.n, m=config.m).fit(corpus)


def query_inverted(index, corpus, pattern, matcher=None):
    return index.search(corpus, pattern, matcher)


def build_signature(corpus, grams, n=2, m=None, w=64, h=1, seed=0):
    m = getattr(corpus, "granularity", 1) if m is None else m
    return SignatureIndex(GramDictionary(grams), n=n, m=m, w=w, h=h, seed=seed).fit(corpus)


def query_signature(index, corpus, pattern, matcher=None):
    return index.search(corpus, pattern, matcher)
