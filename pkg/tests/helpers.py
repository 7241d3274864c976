"""Random corpora, patterns, and brute-force oracles shared by the tests."""

import math
import random
import re
import sre_constants
import sre_parse
import string

from rei.grams import extract_literals

SMALL_ALPHABET = "abcdefgh0123 =:"
PRINTABLE = "".join(chr(c) for c in range(32, 127))

PIECES = (
    r"\d+", r"\d*", ".", ".*", "[a-d]+", "[^x]", r"\s", r"\w+", "(ab|cd)", "(?:e|f)?",
    "a?", "b*", "(?:gh)+", "[0-3]{1,2}", "(?i:ab)", "c{0,2}", "=+",
)


def random_line(rng, max_len=40):
    length = rng.randint(0, max_len)
    chars = []
    for _ in range(length):
        chars.append(rng.choice(SMALL_ALPHABET) if rng.random() < 0.9 else rng.choice(PRINTABLE))
    return "".join(chars).encode()


def random_corpus(rng, max_lines=200, max_len=40):
    return [random_line(rng, max_len) for _ in range(rng.randint(0, max_lines))]


def random_pattern(rng, lines=()):
    """Mix of escaped substrings of corpus lines and regex constructs."""
    parts = []
    for _ in range(rng.randint(1, 4)):
        if lines and rng.random() < 0.55:
            line = rng.choice(lines).decode()
            if line:
                i = rng.randrange(len(line))
                j = min(len(line), i + rng.randint(1, 6))
                parts.append(re.escape(line[i:j]))
                continue
        if rng.random() < 0.5:
            parts.append(re.escape("".join(rng.choice(SMALL_ALPHABET) for _ in range(rng.randint(1, 4)))))
        else:
            parts.append(rng.choice(PIECES))
    return "".join(parts)


def random_query_set(rng, max_queries=5, lines=()):
    return [random_pattern(rng, lines) for _ in range(rng.randint(1, max_queries))]


# --- strings matched by a pattern, generated from its parse tree ---

def _category_chars(cat):
    if cat == sre_constants.CATEGORY_DIGIT:
        return string.digits
    if cat == sre_constants.CATEGORY_SPACE:
        return " \t"
    if cat == sre_constants.CATEGORY_WORD:
        return string.ascii_letters + string.digits + "_"
    if cat == sre_constants.CATEGORY_NOT_DIGIT:
        return string.ascii_letters + " "
    if cat == sre_constants.CATEGORY_NOT_SPACE:
        return string.ascii_letters + string.digits
    if cat == sre_constants.CATEGORY_NOT_WORD:
        return " -=:"
    raise NotImplementedError(cat)


def _class_chars(items):
    negate = False
    allowed = set()
    for op, av in items:
        if op == sre_constants.NEGATE:
            negate = True
        elif op == sre_constants.LITERAL:
            allowed.add(chr(av))
        elif op == sre_constants.RANGE:
            allowed.update(chr(c) for c in range(av[0], av[1] + 1))
        elif op == sre_constants.CATEGORY:
            allowed.update(_category_chars(av))
        else:
            raise NotImplementedError(op)
    if negate:
        return [c for c in PRINTABLE if c not in allowed]
    return sorted(allowed)


def _gen(items, rng, out, ignorecase=False):
    for op, av in items:
        if op == sre_constants.LITERAL:
            ch = chr(av)
            out.append(ch.swapcase() if ignorecase and rng.random() < 0.5 else ch)
        elif op == sre_constants.NOT_LITERAL:
            out.append(rng.choice([c for c in PRINTABLE if c != chr(av)]))
        elif op == sre_constants.ANY:
            out.append(rng.choice(PRINTABLE))
        elif op == sre_constants.IN:
            out.append(rng.choice(_class_chars(av)))
        elif op in (sre_constants.MAX_REPEAT, sre_constants.MIN_REPEAT):
            lo, hi, body = av
            hi = min(hi, lo + 3)
            for _ in range(rng.randint(lo, hi)):
                _gen(body, rng, out, ignorecase)
        elif op == sre_constants.SUBPATTERN:
            _group, add_flags, _del, body = av
            _gen(body, rng, out, ignorecase or bool(add_flags & sre_constants.SRE_FLAG_IGNORECASE))
        elif op == sre_constants.BRANCH:
            _gen(rng.choice(av[1]), rng, out, ignorecase)
        elif op == sre_constants.AT:
            pass
        else:
            raise NotImplementedError(op)


def generate_match(pattern, rng):
    tree = sre_parse.parse(pattern)
    ignorecase = bool(tree.state.flags & sre_constants.SRE_FLAG_IGNORECASE)
    out = []
    _gen(tree, rng, out, ignorecase)
    return "".join(out)


# --- independent oracles ---

def literal_grams(pattern, n):
    grams = set()
    for lit in extract_literals(pattern):
        if len(lit) >= n:
            grams.update(lit[i:i + n] for i in range(len(lit) - n + 1))
    return grams


def brute_freq(queries, n, k):
    candidates = set()
    for q in queries:
        candidates |= literal_grams(q, n)
    counts = {g: sum(1 for q in queries if g in literal_grams(q, n)) for g in candidates}
    order = sorted(counts, key=lambda g: (-counts[g], g))
    return order[:k]


def brute_cover(g, queries, lines, n):
    return {
        (qi, li)
        for qi, q in enumerate(queries)
        for li, line in enumerate(lines)
        if g in literal_grams(q, n) and g not in line
    }


def brute_bene(queries, lines, n, k):
    candidates = set()
    for q in queries:
        candidates |= literal_grams(q, n)
    bene = {g: len(brute_cover(g, queries, lines, n)) for g in candidates}
    return sorted(bene, key=lambda g: (-bene[g], g))[:k]


def brute_incr_bene(queries, lines, n, k, pairwise=False):
    candidates = set()
    for q in queries:
        candidates |= literal_grams(q, n)
    covers = {g: brute_cover(g, queries, lines, n) for g in candidates}
    chosen = []
    while len(chosen) < k and len(chosen) < len(candidates):
        basis = [chosen[-1]] if pairwise and chosen else chosen
        base = set().union(*(covers[c] for c in basis)) if basis else set()
        gains = {}
        for g in candidates - set(chosen):
            gains[g] = len(base | covers[g]) - len(base)
        best = max(gains.values())
        if best > 0:
            pick = min((g for g in gains if gains[g] == best))
        else:
            pick = min(gains, key=lambda g: (-len(covers[g]), g))
        chosen.append(pick)
    return chosen


def direct_score(queries, lines, grams, m, n=2):
    """Score formula evaluated from brute-force probabilities."""
    blocks = [lines[i:i + m] for i in range(0, len(lines), m)]
    nb = len(blocks)
    factors = []
    for g in grams:
        p_q = sum(1 for q in queries if g in literal_grams(q, n)) / len(queries)
        p_l = sum(1 for b in blocks if any(g in line for line in b)) / nb
        factors.append(1.0 - p_q * (1.0 - p_l))
    return len(queries) * nb * (1.0 - math.prod(factors))


def rng_for(seed):
    return random.Random(seed)
