"""Byte-oriented range coder over 16-bit cumulative frequency tables.

The coder keeps a 32-bit ``range`` (renormalized to at least 2**24) and a
``low`` that may overflow into bit 32; overflow is propagated as a carry into
bytes already written.  Sub-intervals are split exactly,
``floor(range * cum / 65536)`` on both ends, instead of the usual
``range // total * cum``, so coding loss stays far below a bit per stream
no matter how many symbols are coded.  The final 4 bytes of ``low`` are
flushed, which makes the output exactly
``log2(final_range) + cross_entropy`` bits, between 24 and 32 bits over the
quantized cross-entropy.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence

import numpy as np

from .errors import DecodeError, EncodeError

PROB_BITS = 16
PROB_TOTAL = 1 << PROB_BITS
_TOP = 1 << 32
_MASK = _TOP - 1
_BOT = 1 << 24


class RangeEncoder:
    def __init__(self):
        self.low = 0
        self.range = _MASK
        self.out = bytearray()

    def encode(self, start: int, freq: int) -> None:
        """Narrow to ``[start, start + freq)`` out of 65536."""
        r = self.range
        lo = (r * start) >> PROB_BITS
        self.range = ((r * (start + freq)) >> PROB_BITS) - lo
        self.low += lo
        if self.low >= _TOP:
            self.low -= _TOP
            self._carry()
        while self.range < _BOT:
            self.out.append(self.low >> 24)
            self.low = (self.low << 8) & _MASK
            self.range <<= 8

    def _carry(self) -> None:
        out = self.out
        i = len(out) - 1
        while out[i] == 0xFF:
            out[i] = 0
            i -= 1
        out[i] += 1

    def finish(self) -> bytes:
        self.out += self.low.to_bytes(4, "big")
        return bytes(self.out)


class RangeDecoder:
    def __init__(self, data: bytes):
        self.data = memoryview(bytes(data))
        if len(self.data) < 4:
            raise DecodeError("range-coded payload shorter than its 4-byte flush")
        self.pos = 4
        self.code = int.from_bytes(self.data[:4], "big")
        self.range = _MASK

    def decode(self, cdf: np.ndarray) -> int:
        """Decode one table index from the cumulative table ``cdf``."""
        r = self.range
        # largest s with floor(r * cdf[s] / T) <= code
        target = (((self.code + 1) << PROB_BITS) - 1) // r
        last = len(cdf) - 2
        s = int(np.searchsorted(cdf, target, side="right")) - 1
        if s > last:
            s = last
        elif s < 0:
            s = 0
        lo = (r * int(cdf[s])) >> PROB_BITS
        hi = (r * int(cdf[s + 1])) >> PROB_BITS
        # a mismatched table can push code outside the interval; keep it 32-bit
        self.code = (self.code - lo) & _MASK
        self.range = max(hi - lo, 1)
        while self.range < _BOT:
            if self.pos >= len(self.data):
                raise DecodeError("payload truncated at byte %d" % self.pos)
            self.code = ((self.code << 8) | self.data[self.pos]) & _MASK
            self.pos += 1
            self.range <<= 8
        return s


def _cdf_array(table) -> np.ndarray:
    return table.cdf if hasattr(table, "cdf") else np.asarray(table)


def encode_symbols(pairs: Iterable[tuple[object, int]]) -> bytes:
    """Range-code ``(table, index)`` pairs; a table is a QuantizedCdf or cdf array."""
    enc = RangeEncoder()
    for pos, (table, index) in enumerate(pairs):
        cdf = _cdf_array(table)
        index = int(index)
        if not 0 <= index < len(cdf) - 1:
            raise EncodeError("index %d at position %d is outside the table's %d symbols" % (index, pos, len(cdf) - 1))
        start = int(cdf[index])
        enc.encode(start, int(cdf[index + 1]) - start)
    return enc.finish()


def encode_intervals(starts: Sequence[int], freqs: Sequence[int]) -> bytes:
    """Range-code precomputed (cumulative start, frequency) pairs."""
    enc = RangeEncoder()
    encode = enc.encode
    for start, freq in zip(starts, freqs):
        encode(start, freq)
    return enc.finish()


def decode_symbols(tables: Callable[[int], object] | Sequence, data: bytes, count: int) -> list[int]:
    """Inverse of :func:`encode_symbols`.

    ``tables`` is either a sequence of tables or a callable returning the
    table for position ``i``; the callable form lets a table depend on
    symbols decoded earlier.
    """
    provider = tables if callable(tables) else tables.__getitem__
    dec = RangeDecoder(data)
    decode = dec.decode
    return [decode(_cdf_array(provider(i))) for i in range(count)]
