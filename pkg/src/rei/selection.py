"""Choosing which k grams to index.

Four strategies are available: query frequency (``freq``), individual benefit
(``bene``), greedy incremental benefit (``incr_bene``) and a fixed English
bigram ranking (``english``). Every ranking sorts by descending score and
breaks ties by ascending byte order.
"""

from collections import Counter
from importlib import resources

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _scan
from ._validation import check_lines, check_positive_int, check_queries
from .corpus import Corpus, Workload
from .grams import GramDictionary, query_grams

STRATEGIES = ("freq", "bene", "incr_bene", "english")


def _rank(scores, k):
    order = sorted(scores, key=lambda g: (-scores[g], g))
    return GramDictionary(order[:k])


def _queries_of(workload_or_queries):
    queries = getattr(workload_or_queries, "queries", workload_or_queries)
    queries = check_queries(queries)
    if not queries:
        raise ValueError("empty query set: nothing to select from")
    return queries


def query_frequencies(queries, n):
    """Number of queries whose literals contain each gram (once per query)."""
    counts = Counter()
    for q in check_queries(queries):
        counts.update(query_grams(q, n))
    return counts


def select_freq(queries, n, k):
    check_positive_int(k, "k")
    queries = _queries_of(queries)
    return _rank(query_frequencies(queries, n), k)


def _texts(workload):
    return check_lines(workload.corpus)


def compute_cover(g, workload, n=None):
    """Pairs ``(query index, line id)`` that gram ``g`` can filter out.

    ``n`` defaults to ``len(g)``.
    """
    g = bytes(g) if not isinstance(g, str) else g.encode()
    n = len(g) if n is None else n
    texts = _texts(workload)
    pairs = set()
    for qi, q in enumerate(check_queries(workload.queries)):
        if g not in query_grams(q, n):
            continue
        for li, line in enumerate(texts):
            if g not in line:
                pairs.add((qi, li))
    return pairs


class _CoverModel:
    """Cover sets of every candidate gram, as Python-int bitsets over Q x L."""

    def __init__(self, workload, n):
        self.queries = _queries_of(workload)
        texts = _texts(workload)
        self.num_lines = len(texts)
        holders = {}
        for qi, q in enumerate(self.queries):
            for g in query_grams(q, n):
                holders.setdefault(g, []).append(qi)
        self.candidates = sorted(holders)
        self.holders = holders
        presence = _scan.group_presence(texts, self.candidates, 1)
        self.containing = presence.sum(axis=0) if presence.size else np.zeros(len(self.candidates), int)
        self.bene = {
            g: len(holders[g]) * (self.num_lines - int(self.containing[j]))
            for j, g in enumerate(self.candidates)
        }
        self._presence = presence

    def cover_bits(self):
        L = self.num_lines
        out = {}
        for j, g in enumerate(self.candidates):
            absent = ~self._presence[:, j] if L else np.zeros(0, bool)
            line_bits = int.from_bytes(np.packbits(absent, bitorder="little").tobytes(), "little")
            cov = 0
            for qi in self.holders[g]:
                cov |= line_bits << (qi * L)
            out[g] = cov
        return out


def select_bene(workload, n, k):
    check_positive_int(k, "k")
    return _rank(_CoverModel(workload, n).bene, k)


def select_incr_bene(workload, n, k, pairwise=False):
    """Greedy selection by incremental benefit.

    With ``pairwise=True`` each pick is conditioned only on the previous pick
    instead of the whole selected set.
    """
    check_positive_int(k, "k")
    model = _CoverModel(workload, n)
    covers = model.cover_bits()
    bene = model.bene
    remaining = set(model.candidates)
    chosen = []
    covered = 0
    while remaining and len(chosen) < k:
        best, best_gain = None, 0
        for g in sorted(remaining):
            gain = (covers[g] & ~covered).bit_count()
            if gain > best_gain:
                best, best_gain = g, gain
        if best is None:
            best = min(remaining, key=lambda g: (-bene[g], g))
        chosen.append(best)
        remaining.discard(best)
        covered = covers[best] if pairwise else covered | covers[best]
    return GramDictionary(chosen)


def load_ranking(path=None):
    """Read an English bigram ranking: ``<gram><TAB><count>`` per line.

    ``path=None`` loads the ranking bundled with the package.
    """
    if path is None:
        data = resources.files("rei").joinpath("data/english_bigrams.tsv").read_bytes()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    counts = {}
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        gram, sep, count = line.rpartition(b"\t")
        if not sep or not gram:
            raise ValueError(f"ranking line {lineno}: expected '<gram>\\t<count>'")
        counts[gram] = int(count)
    return counts


def english_grams(k, ranking=None):
    check_positive_int(k, "k")
    counts = ranking if isinstance(ranking, dict) else load_ranking(ranking)
    if k > len(counts):
        raise ValueError(f"k={k} exceeds the ranking table size {len(counts)}")
    return _rank(counts, k)


def select_grams(strategy, n, k, queries=None, lines=None, pairwise=False, ranking=None):
    if strategy == "freq":
        return select_freq(queries, n, k)
    if strategy == "english":
        return english_grams(k, ranking)
    if lines is None:
        raise ValueError(f"strategy {strategy!r} needs the log lines")
    workload = lines if isinstance(lines, Workload) else Workload(_as_corpus(lines), tuple(_queries_of(queries)))
    if strategy == "bene":
        return select_bene(workload, n, k)
    if strategy == "incr_bene":
        return select_incr_bene(workload, n, k, pairwise=pairwise)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def _as_corpus(lines):
    return lines if isinstance(lines, Corpus) else Corpus(lines)


class GramSelector(TransformerMixin, BaseEstimator):
    """Select the grams to index, then map lines to gram-presence features.

    Parameters
    ----------
    strategy : {"freq", "bene", "incr_bene", "english"}
    n : int
        Gram length used to split query literals.
    k : int
        Number of grams to keep. Fewer are kept if fewer candidates exist.
    pairwise : bool
        ``incr_bene`` only: condition on the previous pick alone.
    ranking : str or None
        Path to an English ranking file overriding the bundled one.

    Attributes
    ----------
    dictionary_ : GramDictionary
    """

    def __init__(self, strategy="freq", n=2, k=64, pairwise=False, ranking=None):
        self.strategy = strategy
        self.n = n
        self.k = k
        self.pairwise = pairwise
        self.ranking = ranking

    def fit(self, X=None, y=None, queries=None):
        check_positive_int(self.n, "n")
        check_positive_int(self.k, "k")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        self.dictionary_ = select_grams(
            self.strategy, self.n, self.k, queries=queries, lines=X,
            pairwise=self.pairwise, ranking=self.ranking,
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "dictionary_")
        texts = check_lines(X)
        return _scan.group_presence(texts, self.dictionary_.grams, 1)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "dictionary_")
        return np.array([g.decode("latin-1") for g in self.dictionary_.grams], dtype=object)
