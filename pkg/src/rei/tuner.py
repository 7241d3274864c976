"""Pick (k, m) under a size budget from cheap filtering estimates.

For each candidate gram the model keeps the fraction of queries whose
literals contain it and, per granularity, the fraction of blocks containing
it. A configuration's score estimates how many (query, block) pairs the top-k
grams would filter; configurations are ranked by score per index bit.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _scan
from ._validation import check_lines, check_positive_int, check_queries
from .selection import query_frequencies

DEFAULT_GRANULARITIES = (1, 8, 32, 64, 128, 256, 512)

_UNITS = {
    "": 1, "bit": 1, "bits": 1, "b": 1,
    "B": 8, "byte": 8, "bytes": 8,
    "KB": 8 << 10, "KIB": 8 << 10, "K": 8 << 10,
    "MB": 8 << 20, "MIB": 8 << 20, "M": 8 << 20,
    "GB": 8 << 30, "GIB": 8 << 30, "G": 8 << 30,
}


def parse_budget(text):
    """Size budget in bits. Bare numbers are bits; ``B`` and K/M/G suffixes are bytes (powers of 1024)."""
    if isinstance(text, int):
        return text
    match = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([A-Za-z]*)\s*", str(text))
    if not match:
        raise ValueError(f"cannot parse budget {text!r}")
    number, unit = match.groups()
    key = unit if unit in ("b", "B") else unit.upper() if unit.upper() in _UNITS else unit.lower()
    if key not in _UNITS:
        raise ValueError(f"unknown budget unit {unit!r}")
    return int(float(number) * _UNITS[key])


def num_blocks(num_lines, m):
    return -(-num_lines // m)


def index_size_bits(k, m, num_lines):
    """Unpadded size ``k * ceil(num_lines / m)``."""
    check_positive_int(k, "k")
    check_positive_int(m, "m")
    return k * num_blocks(num_lines, m)


@dataclass
class TunerModel:
    """Query-side and block-side containment probabilities per gram.

    ``grams`` is ranked by query frequency (ties by byte order), which is
    the order used to form top-k sets.
    """

    grams: list
    p_query: dict
    p_block: dict
    num_queries: int
    num_lines: int
    sample_lines: int = None
    blocks: dict = field(default_factory=dict)

    def n_blocks(self, m):
        return num_blocks(self.num_lines, m)


def build_model(queries, lines, n=2, granularities=DEFAULT_GRANULARITIES, sample_blocks=None):
    """Count containment exactly, or over the first ``sample_blocks`` blocks of the coarsest m."""
    queries = check_queries(queries)
    if not queries:
        raise ValueError("empty query set")
    texts = check_lines(lines)
    granularities = sorted({check_positive_int(m, "m") for m in granularities})
    sample_lines = None
    if sample_blocks is not None:
        sample_lines = min(len(texts), sample_blocks * granularities[-1])
        texts = texts[:sample_lines]
    freq = query_frequencies(queries, n)
    grams = sorted(freq, key=lambda g: (-freq[g], g))
    p_query = {g: freq[g] / len(queries) for g in grams}
    lcm = math.lcm(*granularities)
    hits = {m: np.zeros(len(grams), dtype=np.int64) for m in granularities}
    for _start, chunk in _scan.iter_presence(texts, grams, lcm):
        for m in granularities:
            hits[m] += _scan.reduce_groups(chunk, m).sum(axis=0)
    p_block, blocks = {}, {}
    for m in granularities:
        nb = num_blocks(len(texts), m)
        blocks[m] = nb
        p_block[m] = {g: (hits[m][j] / nb if nb else 0.0) for j, g in enumerate(grams)}
    return TunerModel(
        grams=grams, p_query=p_query, p_block=p_block, num_queries=len(queries),
        num_lines=len(check_lines(lines)), sample_lines=sample_lines, blocks=blocks,
    )


def estimate_score(model, grams, m):
    """Estimated filtered (query, block) pairs for indexing ``grams`` at granularity ``m``."""
    if m not in model.p_block:
        raise KeyError(f"no block statistics for m={m}")
    block = model.p_block[m]
    keep = 1.0
    for g in grams:
        if g not in model.p_query or g not in block:
            raise KeyError(f"missing probabilities for gram {g!r}")
        keep *= 1.0 - model.p_query[g] * (1.0 - block[g])
    return model.num_queries * model.n_blocks(m) * (1.0 - keep)


def max_feasible_k(budget_bits, m, num_lines, k_max):
    """Largest k in ``[1, k_max]`` with ``index_size_bits <= budget``, or 0."""
    lo, hi = 0, k_max
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if index_size_bits(mid, m, num_lines) <= budget_bits:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class TuneRow:
    m: int
    k: int
    score: float
    size_bits: int
    eta: float


def tune(model, budget_bits, granularities=None, k_min=1, k_max=None):
    """Rank candidate granularities by estimated score per bit at their largest feasible k.

    Returns ``(best, rows)``; rows are sorted best first.
    """
    granularities = sorted(model.p_block) if granularities is None else sorted(granularities)
    k_max = len(model.grams) if k_max is None else min(k_max, len(model.grams))
    if k_max < 1:
        raise ValueError("model has no candidate grams")
    rows = []
    for m in granularities:
        k = max_feasible_k(budget_bits, m, model.num_lines, k_max)
        if k < k_min:
            continue
        size = index_size_bits(k, m, model.num_lines)
        score = estimate_score(model, model.grams[:k], m)
        eta = score / size if size else 0.0
        rows.append(TuneRow(m, k, score, size, eta))
    if not rows:
        raise ValueError(f"budget of {budget_bits} bits cannot hold k={k_min} at any granularity")
    rows.sort(key=lambda r: (-r.eta, r.m, -r.k))
    return rows[0], rows


def format_table(rows):
    lines = ["m\tk\tscore\tsize_bits\teta"]
    for r in rows:
        lines.append(f"{r.m}\t{r.k}\t{r.score:.6g}\t{r.size_bits}\t{r.eta:.6g}")
    return "\n".join(lines)


class IndexTuner(BaseEstimator):
    """Estimator wrapper: ``fit(lines, queries=...)`` then read ``best_``.

    Attributes
    ----------
    model_ : TunerModel
    best_ : TuneRow
    rows_ : list of TuneRow
    """

    def __init__(self, budget="256MB", n=2, granularities=DEFAULT_GRANULARITIES, k_max=None, sample_blocks=None):
        self.budget = budget
        self.n = n
        self.granularities = granularities
        self.k_max = k_max
        self.sample_blocks = sample_blocks

    def fit(self, X, y=None, queries=None):
        self.model_ = build_model(queries, X, self.n, self.granularities, self.sample_blocks)
        self.budget_bits_ = parse_budget(self.budget)
        self.best_, self.rows_ = tune(self.model_, self.budget_bits_, k_max=self.k_max)
        return self

    def best_params(self):
        check_is_fitted(self, "best_")
        return {"k": self.best_.k, "m": self.best_.m, "n": self.n}
