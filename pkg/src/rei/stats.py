"""Descriptive statistics over grams, selections, and corpora."""

import math

from ._validation import as_bytes, check_lines


def intersection_percentage(a, b):
    """Fraction of grams shared by two equally sized selections."""
    if len(a) != len(b):
        raise ValueError(f"selection sizes differ: {len(a)} != {len(b)}")
    if not a:
        raise ValueError("empty selections")
    return len(set(a) & set(b)) / len(a)


def selectivity(g, corpus):
    """Fraction of lines that do not contain ``g``. Higher filters more."""
    texts = check_lines(corpus)
    if not texts:
        raise ValueError("selectivity is undefined on an empty corpus")
    g = as_bytes(g)
    missing = sum(1 for t in texts if g not in t)
    return missing / len(texts)


def bigram_in_trigram_overlap(bigrams, trigrams):
    """Fraction of ``bigrams`` that occur inside at least one of ``trigrams``."""
    bigrams = [as_bytes(b) for b in bigrams]
    if not bigrams:
        raise ValueError("empty bigram selection")
    trigrams = [as_bytes(t) for t in trigrams]
    hits = sum(1 for b in bigrams if any(b in t for t in trigrams))
    return hits / len(bigrams)


def zipf_trigram_anomaly_probability(d, a):
    """Probability that the first of three iid Zipf characters strictly outranks the other two.

    Symbol rank ``i`` in ``1..d`` is drawn with probability ``i**-a / H``.
    This is the chance that a trigram's outer pair is more selective than
    both of its inner bigrams.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if a < 0:
        raise ValueError("a must be >= 0")
    weights = [i ** -a for i in range(1, d + 1)]
    h = math.fsum(weights)
    p = [w / h for w in weights]
    tail = 0.0
    terms = []
    for i in range(d - 1, 0, -1):
        tail += p[i]
        terms.append(p[i - 1] * tail * tail)
    return math.fsum(terms)
