"""Bit-vector gram index: one k-bit presence vector per group of m lines."""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _scan
from ._validation import check_lines, check_positive_int
from .grams import GramDictionary
from .selection import GramSelector

MAGIC = b"REI1"
VERSION = 1
_HEADER = struct.Struct("<4sIIIQQ")
_TRAILER = struct.Struct("<Q32s")


@dataclass(frozen=True)
class IndexConfig:
    n: int = 2
    k: int = 64
    m: int = 1

    def __post_init__(self):
        check_positive_int(self.n, "n")
        check_positive_int(self.k, "k")
        check_positive_int(self.m, "m")


class IndexFormatError(ValueError):
    """Base class for unreadable index files."""


class BadMagicError(IndexFormatError):
    pass


class VersionMismatchError(IndexFormatError):
    pass


class TruncatedIndexError(IndexFormatError):
    pass


def index_size_bytes(num_lines, k, m):
    """Storage for the vectors, each padded to whole 64-bit words."""
    check_positive_int(num_lines, "num_lines", minimum=0)
    check_positive_int(k, "k")
    check_positive_int(m, "m")
    return -(-num_lines // m) * _scan.words_for(k) * 8


def corpus_digest(texts):
    h = hashlib.sha256()
    step = 1 << 16
    for start in range(0, len(texts), step):
        h.update(b"\n".join(texts[start:start + step]))
        h.update(b"\n")
    return h.digest()


class BitVectorIndex(BaseEstimator):
    """Per-group gram presence bitmaps for fast regex prefiltering.

    Parameters
    ----------
    n : int
        Gram length used when splitting query literals.
    k : int
        Number of grams to index.
    m : int
        Granularity: lines summarized by one vector.
    strategy : str
        Gram selection strategy, used when ``dictionary`` is None.
    dictionary : GramDictionary, optional
        Use these grams instead of selecting; must hold exactly ``k`` grams.
    pairwise, ranking :
        Forwarded to :class:`~rei.selection.GramSelector`.

    Attributes
    ----------
    dictionary_ : GramDictionary
    vectors_ : ndarray of uint64, shape (num_groups, ceil(k / 64))
        Bit ``i`` of a group lives in word ``i // 64`` at position ``i % 64``.
    n_lines_ : int
    corpus_digest_ : bytes
    """

    def __init__(self, n=2, k=64, m=1, strategy="freq", dictionary=None, pairwise=False, ranking=None):
        self.n = n
        self.k = k
        self.m = m
        self.strategy = strategy
        self.dictionary = dictionary
        self.pairwise = pairwise
        self.ranking = ranking

    def fit(self, X, y=None, queries=None):
        check_positive_int(self.n, "n")
        check_positive_int(self.k, "k", minimum=0 if self.dictionary is not None else 1)
        check_positive_int(self.m, "m")
        texts = check_lines(X)
        if self.dictionary is None:
            selector = GramSelector(self.strategy, self.n, self.k, self.pairwise, self.ranking)
            dictionary = selector.fit(X, queries=queries).dictionary_
        else:
            dictionary = self.dictionary if isinstance(self.dictionary, GramDictionary) else GramDictionary(self.dictionary)
            if len(dictionary) != self.k:
                raise ValueError(f"dictionary holds {len(dictionary)} grams but k={self.k}")
        self.dictionary_ = dictionary
        self.vectors_ = self._vectors(texts)
        self.n_lines_ = len(texts)
        self.corpus_digest_ = corpus_digest(texts)
        return self

    def _vectors(self, texts):
        presence = _scan.group_presence(texts, self.dictionary_.grams, self.m)
        return _scan.pack_rows(presence, len(self.dictionary_))

    def transform(self, X):
        """Vectors for new lines under the fitted dictionary and granularity."""
        check_is_fitted(self, "vectors_")
        return self._vectors(check_lines(X))

    @property
    def config_(self):
        check_is_fitted(self, "vectors_")
        return IndexConfig(self.n, len(self.dictionary_), self.m)

    @property
    def num_groups_(self):
        check_is_fitted(self, "vectors_")
        return self.vectors_.shape[0]

    @property
    def nbytes_(self):
        return int(self.vectors_.nbytes)

    def presence(self):
        """Unpacked boolean ``(num_groups, k)`` view of the vectors."""
        check_is_fitted(self, "vectors_")
        return _scan.unpack_rows(self.vectors_, len(self.dictionary_))

    def filter(self, pattern):
        from .query import filter_groups, make_mask

        return filter_groups(self, make_mask(pattern, self.dictionary_, self.n))

    def search(self, X, pattern, matcher=None):
        from .query import query_indexed

        return query_indexed(self, X, pattern, matcher)

    def save(self, path):
        serialize(self, path)

    @classmethod
    def load(cls, path):
        return deserialize(path)

    def __eq__(self, other):
        if not isinstance(other, BitVectorIndex):
            return NotImplemented
        try:
            check_is_fitted(self, "vectors_")
            check_is_fitted(other, "vectors_")
        except Exception:
            return self is other
        return (
            (self.n, self.m) == (other.n, other.m)
            and self.dictionary_ == other.dictionary_
            and self.n_lines_ == other.n_lines_
            and self.corpus_digest_ == other.corpus_digest_
            and np.array_equal(self.vectors_, other.vectors_)
        )

    __hash__ = None


def build_index(corpus, dictionary, config):
    """Build a vector per group of ``config.m`` lines over ``dictionary``."""
    if len(dictionary) != config.k:
        raise ValueError(f"dictionary holds {len(dictionary)} grams but config.k={config.k}")
    granularity = getattr(corpus, "granularity", config.m)
    if granularity != config.m:
        raise ValueError(f"corpus granularity {granularity} != config.m {config.m}")
    est = BitVectorIndex(n=config.n, k=config.k, m=config.m, dictionary=GramDictionary(dictionary))
    return est.fit(corpus)


def to_bytes(index):
    check_is_fitted(index, "vectors_")
    grams = index.dictionary_.grams
    parts = [_HEADER.pack(MAGIC, VERSION, index.n, len(grams), index.m, index.vectors_.shape[0])]
    for g in grams:
        if len(g) > 0xFFFF:
            raise ValueError("gram longer than 65535 bytes")
        parts.append(struct.pack("<H", len(g)))
        parts.append(g)
    parts.append(index.vectors_.astype("<u8").tobytes())
    parts.append(_TRAILER.pack(index.n_lines_, index.corpus_digest_))
    return b"".join(parts)


def from_bytes(data):
    data = memoryview(data)
    if len(data) < 4 or bytes(data[:4]) != MAGIC:
        raise BadMagicError("bad magic: not an index file")
    if len(data) < _HEADER.size:
        raise TruncatedIndexError("truncated header")
    _, version, n, k, m, num_groups = _HEADER.unpack_from(data)
    if version != VERSION:
        raise VersionMismatchError(f"unsupported index version {version}, expected {VERSION}")
    pos = _HEADER.size
    grams = []
    for _ in range(k):
        if pos + 2 > len(data):
            raise TruncatedIndexError("truncated dictionary")
        (length,) = struct.unpack_from("<H", data, pos)
        pos += 2
        if pos + length > len(data):
            raise TruncatedIndexError("truncated dictionary")
        grams.append(bytes(data[pos:pos + length]))
        pos += length
    words = _scan.words_for(k)
    payload = num_groups * words * 8
    if pos + payload + _TRAILER.size > len(data):
        raise TruncatedIndexError("truncated vector payload")
    vectors = np.frombuffer(data, dtype="<u8", count=num_groups * words, offset=pos)
    vectors = vectors.reshape(num_groups, words).astype(np.uint64)
    pos += payload
    n_lines, digest = _TRAILER.unpack_from(data, pos)
    pos += _TRAILER.size
    if pos != len(data):
        raise IndexFormatError(f"{len(data) - pos} trailing bytes after index")
    dictionary = GramDictionary(grams)
    index = BitVectorIndex(n=n, k=k, m=m, dictionary=dictionary)
    index.dictionary_ = dictionary
    index.vectors_ = vectors
    index.n_lines_ = n_lines
    index.corpus_digest_ = digest
    return index


def serialize(index, path):
    with open(path, "wb") as fh:
        fh.write(to_bytes(index))


def deserialize(path):
    with open(path, "rb") as fh:
        return from_bytes(fh.read())
