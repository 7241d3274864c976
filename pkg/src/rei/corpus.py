"""Line-oriented log corpora and regex workloads."""

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from ._validation import as_bytes, check_lines, check_positive_int


class LogLine(NamedTuple):
    id: int
    text: bytes


class Corpus:
    """An immutable, ordered collection of log lines grouped in blocks of ``m``.

    Lines are opaque byte strings without their terminator.
    """

    __slots__ = ("_texts", "_granularity")

    def __init__(self, texts, granularity=1):
        self._granularity = check_positive_int(granularity, "granularity")
        self._texts = tuple(check_lines(texts))

    @property
    def texts(self):
        return self._texts

    @property
    def granularity(self):
        return self._granularity

    @property
    def num_groups(self):
        return -(-len(self._texts) // self._granularity)

    @property
    def lines(self):
        return [LogLine(i, t) for i, t in enumerate(self._texts)]

    def group_bounds(self, j):
        """Half-open line id range ``[start, stop)`` covered by group ``j``."""
        if not 0 <= j < self.num_groups:
            raise IndexError(f"group {j} out of range")
        start = j * self._granularity
        return start, min(start + self._granularity, len(self._texts))

    def group_of(self, line_id):
        return line_id // self._granularity

    def regroup(self, granularity):
        """Same lines under a different granularity."""
        out = object.__new__(Corpus)
        out._texts = self._texts
        out._granularity = check_positive_int(granularity, "granularity")
        return out

    def __len__(self):
        return len(self._texts)

    def __getitem__(self, i):
        return LogLine(i, self._texts[i])

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return self._granularity == other._granularity and self._texts == other._texts

    def __hash__(self):
        return hash((self._granularity, self._texts))

    def __repr__(self):
        return f"Corpus({len(self._texts)} lines, m={self._granularity}, num_groups={self.num_groups})"


@dataclass(frozen=True)
class Workload:
    corpus: Corpus
    queries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "queries", tuple(as_bytes(q) for q in self.queries))


def split_lines(data):
    """Split raw file bytes into lines; a trailing newline does not start a new line."""
    if not data:
        return []
    lines = data.split(b"\n")
    if lines[-1] == b"":
        lines.pop()
    return lines


def load_corpus(path, granularity=1):
    check_positive_int(granularity, "granularity")
    with open(path, "rb") as fh:
        data = fh.read()
    return Corpus(split_lines(data), granularity)


class QueryFileError(ValueError):
    """Raised when a query file holds patterns that do not compile."""

    def __init__(self, errors):
        self.errors = errors
        detail = "; ".join(f"line {lineno}: {msg}" for lineno, msg in errors)
        super().__init__(f"invalid regex in query file: {detail}")


def load_queries(path):
    """Read one regex per line. Blank lines are skipped."""
    with open(path, "rb") as fh:
        raw = split_lines(fh.read())
    queries, errors = [], []
    for lineno, line in enumerate(raw, start=1):
        if line.endswith(b"\r"):
            line = line[:-1]
        if not line:
            continue
        pattern = line.decode("utf-8", errors="surrogateescape")
        try:
            re.compile(as_bytes(pattern))
        except re.error as exc:
            errors.append((lineno, str(exc)))
            continue
        queries.append(pattern)
    if errors:
        raise QueryFileError(errors)
    return queries

