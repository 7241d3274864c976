"""Input checking shared by the estimators and module-level functions."""

from numbers import Integral


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def as_bytes(text):
    if isinstance(text, bytes):
        return text
    if isinstance(text, (bytearray, memoryview)):
        return bytes(text)
    if isinstance(text, str):
        return text.encode("utf-8", "surrogateescape")
    raise TypeError(f"expected bytes or str, got {type(text).__name__}")


def check_lines(X):
    """Coerce a corpus-like input to a list of byte strings.

    Accepts a :class:`~rei.corpus.Corpus`, or any iterable of ``bytes``/``str``.
    Lines must not contain a newline byte.
    """
    texts = getattr(X, "texts", None)
    if texts is not None:
        return texts
    if isinstance(X, (str, bytes)):
        raise TypeError("expected an iterable of lines, got a single string")
    out = [as_bytes(line) for line in X]
    for i, line in enumerate(out):
        if b"\n" in line:
            raise ValueError(f"line {i} contains a newline byte")
    return out


def check_queries(queries):
    if isinstance(queries, (str, bytes)):
        raise TypeError("expected an iterable of patterns, got a single string")
    return [as_bytes(q) for q in queries]
