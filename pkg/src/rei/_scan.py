"""Vectorized gram-presence scanning over byte lines.

Each chunk of lines is joined with ``\\n`` into one buffer. Every window of
length L is encoded as a big-endian integer and looked up among the sorted
codes of the length-L dictionary grams. A window that straddles two lines
contains the newline byte, so it can only hit a gram that itself contains a
newline, and such grams are dropped up front since no line can contain them.
"""

import numpy as np

CHUNK_BYTES = 1 << 23
_MAX_CODE_LEN = 8


def _window_codes(buf, width):
    count = buf.size - width + 1
    codes = buf[:count].astype(np.uint64)
    for j in range(1, width):
        codes <<= np.uint64(8)
        codes |= buf[j:j + count]
    return codes


def _encode(gram):
    return int.from_bytes(gram, "big")


class _Plan:
    """Dictionary grams bucketed by length, precomputed for lookups."""

    def __init__(self, grams):
        self.k = len(grams)
        by_len = {}
        self.long = []
        for col, g in enumerate(grams):
            if b"\n" in g:
                continue
            if len(g) <= _MAX_CODE_LEN:
                by_len.setdefault(len(g), []).append((_encode(g), col))
            else:
                self.long.append((g, col))
        self.tables = []
        for width, pairs in sorted(by_len.items()):
            pairs.sort()
            codes = np.array([c for c, _ in pairs], dtype=np.uint64)
            cols = np.array([c for _, c in pairs], dtype=np.intp)
            dense = None
            if width <= 2:
                dense = np.full(1 << (8 * width), -1, dtype=np.int32)
                dense[codes.astype(np.intp)] = cols
            self.tables.append((width, codes, cols, dense))

    def chunk_presence(self, lines):
        """Boolean matrix ``(len(lines), k)``: gram ``j`` is a substring of line ``i``."""
        out = np.zeros((len(lines), self.k), dtype=bool)
        if not lines or not self.k:
            return out
        buf = np.frombuffer(b"\n".join(lines), dtype=np.uint8)
        lengths = np.fromiter((len(t) for t in lines), dtype=np.int64, count=len(lines))
        starts = np.zeros(len(lines), dtype=np.int64)
        np.cumsum(lengths[:-1] + 1, out=starts[1:])
        for width, codes, cols, dense in self.tables:
            if buf.size < width:
                continue
            win = _window_codes(buf, width)
            if dense is not None:
                hit_col = dense[win.astype(np.intp)]
                pos = np.flatnonzero(hit_col >= 0)
                col = hit_col[pos]
            else:
                idx = np.searchsorted(codes, win)
                np.minimum(idx, codes.size - 1, out=idx)
                pos = np.flatnonzero(codes[idx] == win)
                col = cols[idx[pos]]
            row = np.searchsorted(starts, pos, side="right") - 1
            out[row, col] = True
        for g, col in self.long:
            out[:, col] = [g in t for t in lines]
        return out


def _chunk_lines(texts, multiple):
    total = sum(len(t) for t in texts) + len(texts)
    avg = max(1, total // max(1, len(texts)))
    lines = max(1, CHUNK_BYTES // avg)
    return -(-lines // multiple) * multiple


def iter_presence(texts, grams, multiple=1):
    """Yield ``(first_line_id, presence)`` over chunks of lines.

    Chunk sizes are multiples of ``multiple`` so group boundaries never split.
    """
    plan = _Plan(grams)
    step = _chunk_lines(texts, multiple)
    for start in range(0, len(texts), step):
        yield start, plan.chunk_presence(texts[start:start + step])


def reduce_groups(presence, m):
    """OR consecutive blocks of ``m`` rows together."""
    if m == 1 or presence.shape[0] == 0:
        return presence
    return np.logical_or.reduceat(presence, np.arange(0, presence.shape[0], m), axis=0)


def group_presence(texts, grams, m):
    """Boolean matrix ``(num_groups, k)`` of gram presence per group of ``m`` lines."""
    num_groups = -(-len(texts) // m)
    out = np.zeros((num_groups, len(grams)), dtype=bool)
    for start, chunk in iter_presence(texts, grams, m):
        g0 = start // m
        block = reduce_groups(chunk, m)
        out[g0:g0 + block.shape[0]] = block
    return out


def words_for(k):
    return -(-k // 64)


def pack_rows(presence, k):
    """Pack a boolean ``(rows, k)`` matrix into little-endian 64-bit words.

    Bit ``i`` of a row lands in word ``i // 64`` at position ``i % 64``.
    """
    words = words_for(k)
    rows = presence.shape[0]
    if words == 0:
        return np.zeros((rows, 0), dtype=np.uint64)
    padded = np.zeros((rows, words * 64), dtype=bool)
    padded[:, :presence.shape[1]] = presence
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, words).astype(np.uint64)


def unpack_rows(words, k):
    if k == 0:
        return np.zeros((words.shape[0], 0), dtype=bool)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    bits = np.unpackbits(as_bytes.reshape(words.shape[0], words.shape[1] * 8), axis=1, bitorder="little")
    return bits[:, :k].astype(bool)
