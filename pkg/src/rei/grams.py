"""N-gram generation, required-literal extraction, and the gram dictionary."""

from collections import Counter
from collections.abc import Mapping
from functools import lru_cache

try:
    from re import _parser as sre_parse  # Python >= 3.11
    from re import _constants as sre_constants
except ImportError:  # pragma: no cover - Python 3.10
    import sre_constants
    import sre_parse

from ._validation import as_bytes, check_positive_int

_REPEATS = {sre_constants.MAX_REPEAT, sre_constants.MIN_REPEAT}
if hasattr(sre_constants, "POSSESSIVE_REPEAT"):  # pragma: no cover
    _REPEATS.add(sre_constants.POSSESSIVE_REPEAT)
_ATOMIC = getattr(sre_constants, "ATOMIC_GROUP", None)


def generate_ngrams(s, n):
    """Count every length-``n`` substring of ``s``.

    Strings no longer than ``n`` yield themselves once; the empty string yields
    nothing.

    >>> dict(generate_ngrams(b"vmName", 3))
    {b'vmN': 1, b'mNa': 1, b'Nam': 1, b'ame': 1}
    """
    check_positive_int(n, "n")
    s = as_bytes(s)
    if not s:
        return Counter()
    if len(s) <= n:
        return Counter({s: 1})
    return Counter(s[i:i + n] for i in range(len(s) - n + 1))


def extract_literals(pattern):
    """Return literal byte strings that every match of ``pattern`` contains.

    Only maximal runs of plain characters on the required concatenation path
    are kept. Anything under alternation, inside a character class, under a
    repeat that admits zero occurrences, or under case-insensitive matching is
    dropped, so the result may be empty but is never wrong.

    Raises ``re.error`` for an invalid pattern.
    """
    parsed = sre_parse.parse(as_bytes(pattern))
    if parsed.state.flags & sre_constants.SRE_FLAG_IGNORECASE:
        return []
    literals = []
    run = bytearray()

    def flush():
        if run:
            literals.append(bytes(run))
            run.clear()

    def walk(items):
        for op, av in items:
            if op is sre_constants.LITERAL:
                run.append(av)
            elif op is sre_constants.SUBPATTERN:
                _group, add_flags, _del_flags, sub = av
                if add_flags & sre_constants.SRE_FLAG_IGNORECASE:
                    flush()
                else:
                    walk(sub)
            elif _ATOMIC is not None and op is _ATOMIC:  # pragma: no cover
                walk(av)
            elif op in _REPEATS:
                lo, _hi, body = av
                flush()
                if lo >= 1:
                    walk(body)
                    flush()
            else:
                flush()

    walk(parsed)
    flush()
    return literals


@lru_cache(maxsize=4096)
def _query_grams(pattern, n):
    grams = set()
    for lit in extract_literals(pattern):
        if len(lit) >= n:
            grams.update(generate_ngrams(lit, n))
    return frozenset(grams)


def query_grams(pattern, n):
    """Distinct length-``n`` grams of the pattern's required literals.

    Literals shorter than ``n`` contribute nothing.
    """
    return _query_grams(as_bytes(pattern), check_positive_int(n, "n"))


@lru_cache(maxsize=4096)
def _required_literals(pattern):
    return tuple(extract_literals(pattern))


def required_literals(pattern):
    return _required_literals(as_bytes(pattern))


class GramDictionary(Mapping):
    """Ordered, immutable mapping from gram to bit offset ``0..k-1``."""

    __slots__ = ("_grams", "_offsets")

    def __init__(self, grams=()):
        self._grams = tuple(as_bytes(g) for g in grams)
        self._offsets = {g: i for i, g in enumerate(self._grams)}
        if len(self._offsets) != len(self._grams):
            raise ValueError("duplicate gram in dictionary")
        if any(not g for g in self._grams):
            raise ValueError("empty gram in dictionary")

    @property
    def grams(self):
        return self._grams

    @property
    def k(self):
        return len(self._grams)

    def __getitem__(self, gram):
        return self._offsets[as_bytes(gram)]

    def __contains__(self, gram):
        try:
            return as_bytes(gram) in self._offsets
        except TypeError:
            return False

    def __iter__(self):
        return iter(self._grams)

    def __len__(self):
        return len(self._grams)

    def __eq__(self, other):
        if isinstance(other, GramDictionary):
            return self._grams == other._grams
        return super().__eq__(other)

    def __hash__(self):
        return hash(self._grams)

    def __repr__(self):
        shown = ", ".join(f"{g!r}->{i}" for i, g in enumerate(self._grams[:8]))
        more = ", ..." if len(self._grams) > 8 else ""
        return f"GramDictionary({{{shown}{more}}})"

    def truncate(self, k):
        return GramDictionary(self._grams[:k])
