"""Stream-level encoding and decoding of latent symbols with side information.

The entropy-model parameters are never coded; both sides must hold the same
parameter file.  Parameters pass through float32 on the way in so in-memory
and on-disk inputs produce identical tables.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import formats, ggd_math
from .errors import EncodeError, FormatError
from .formats import ContainerHeader
from .interval_model import (
    DEFAULT_ALPHABET,
    PROB_TOTAL,
    Alphabet,
    CodingMode,
    ModelRows,
    QuantizedCdf,
    SymbolParams,
    build_cdf_tables,
    coded_log_likelihood,
    mode_rows,
)
from .range_coder import RangeDecoder, encode_intervals

_ENCODE_CHUNK = 1024
_DECODE_WINDOW = 2048
_CACHE_LIMIT = 1 << 15
_INV_LN2 = 1.4426950408889634


@dataclass(frozen=True)
class LatentRecord:
    y_hat: int
    params: SymbolParams


def _f32(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).astype(np.float32).astype(np.float64)


@dataclass(frozen=True, eq=False)
class ParamTable:
    """Columnar SymbolParams, each value already rounded to float32."""

    mu: np.ndarray
    sigma: np.ndarray
    beta: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        cols = [np.atleast_1d(_f32(getattr(self, name))) for name in ("mu", "sigma", "beta", "pi")]
        n = max(c.shape[0] for c in cols)
        try:
            cols = [np.broadcast_to(c, (n,)).copy() if c.ndim == 1 else None for c in cols]
        except ValueError:
            cols = [None]
        if any(c is None for c in cols):
            raise FormatError("parameter columns must be 1-D and of equal length")
        for name, col in zip(("mu", "sigma", "beta", "pi"), cols):
            object.__setattr__(self, name, col)

    @classmethod
    def from_params(cls, params: Iterable[SymbolParams]) -> "ParamTable":
        params = list(params)
        return cls(*(np.array([getattr(p, f) for p in params], dtype=np.float64) for f in ("mu", "sigma", "beta", "pi")))

    @classmethod
    def from_array(cls, arr) -> "ParamTable":
        arr = np.asarray(arr).reshape(-1, 4)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])

    @classmethod
    def from_bytes(cls, data: bytes) -> "ParamTable":
        return cls.from_array(formats.unpack_params(data))

    def to_bytes(self) -> bytes:
        return formats.pack_params(self.mu, self.sigma, self.beta, self.pi)

    def __len__(self) -> int:
        return self.mu.shape[0]

    def __getitem__(self, i: int) -> SymbolParams:
        return SymbolParams(self.mu[i], self.sigma[i], self.beta[i], self.pi[i])

    def rows(self, mode) -> ModelRows:
        return mode_rows(mode, self.mu, self.sigma, self.beta, self.pi)

    def dedupe(self) -> tuple["ParamTable", np.ndarray]:
        """Distinct parameter tuples (bitwise) and the inverse index."""
        bits = np.stack([c.astype(np.float32).view(np.uint32) for c in (self.mu, self.sigma, self.beta, self.pi)], axis=1)
        if len(self) == 0:
            return self, np.zeros(0, dtype=np.int64)
        uniq, inv = np.unique(bits, axis=0, return_inverse=True)
        vals = uniq.view(np.float32).astype(np.float64)
        return ParamTable(vals[:, 0], vals[:, 1], vals[:, 2], vals[:, 3]), inv.reshape(-1)


@dataclass(frozen=True, eq=False)
class LatentBatch:
    """Quantized symbols paired with their side information."""

    y_hat: np.ndarray
    params: ParamTable

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.y_hat))
        if y.dtype.kind == "f":
            if np.any(y != np.round(y)):
                raise EncodeError("symbols must be integers")
        object.__setattr__(self, "y_hat", y.astype(np.int64))
        if self.y_hat.shape != (len(self.params),):
            raise FormatError("%d symbols but %d parameter records" % (self.y_hat.size, len(self.params)))

    @classmethod
    def from_records(cls, records: Iterable[LatentRecord]) -> "LatentBatch":
        records = list(records)
        return cls(np.array([r.y_hat for r in records], dtype=np.int64), ParamTable.from_params(r.params for r in records))

    def __len__(self) -> int:
        return self.y_hat.shape[0]

    def __iter__(self) -> Iterator[LatentRecord]:
        for i in range(len(self)):
            yield LatentRecord(int(self.y_hat[i]), self.params[i])


def as_batch(records) -> LatentBatch:
    return records if isinstance(records, LatentBatch) else LatentBatch.from_records(records)


def as_params(params) -> ParamTable:
    if isinstance(params, ParamTable):
        return params
    if isinstance(params, (bytes, bytearray, memoryview)):
        return ParamTable.from_bytes(bytes(params))
    return ParamTable.from_params(params)


@dataclass
class RateReport:
    """Bit accounting for one coding mode.

    ``estimated_bits`` uses real interval masses, ``quantized_bits`` the
    16-bit table frequencies actually handed to the coder.
    """

    mode: str
    count: int
    estimated_bits: float
    quantized_bits: float | None = None
    coded_bytes: int | None = None
    symbol_bits: np.ndarray | None = field(default=None, repr=False)

    @property
    def likelihoods(self) -> np.ndarray | None:
        # may underflow to 0 where symbol_bits stays finite
        return None if self.symbol_bits is None else np.exp2(-self.symbol_bits)

    @property
    def bits_per_symbol(self) -> float:
        bits = self.coded_bytes * 8 if self.coded_bytes is not None else self.estimated_bits
        return bits / self.count if self.count else 0.0

    def csv_row(self) -> str:
        coded = "" if self.coded_bytes is None else str(self.coded_bytes)
        return "%s,%.6f,%s,%.9f" % (self.mode, self.estimated_bits, coded, self.bits_per_symbol)


class TableBank:
    """Builds quantized tables for distinct parameter tuples on demand.

    Tables are cached by distinct-tuple id up to a size limit, after which the
    cache is dropped wholesale; every table is a pure function of its tuple,
    so rebuilding is harmless.
    """

    def __init__(self, params: ParamTable, mode, alphabet: Alphabet = DEFAULT_ALPHABET, limit: int = _CACHE_LIMIT):
        self.mode = CodingMode.parse(mode)
        self.alphabet = alphabet
        self.unique, self.inverse = params.dedupe()
        self.rows = self.unique.rows(self.mode)
        self.limit = limit
        self._cache: dict[int, np.ndarray] = {}

    def tables_for_ids(self, ids: np.ndarray) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        need = np.unique(ids)
        missing = np.array([i for i in need.tolist() if i not in self._cache], dtype=np.int64)
        if missing.size:
            if len(self._cache) + missing.size > self.limit:
                self._cache.clear()
                missing = need
            built = build_cdf_tables(self.rows.take(missing), self.alphabet)
            for i, row in zip(missing.tolist(), built):
                self._cache[i] = row
        return np.stack([self._cache[i] for i in ids.tolist()]) if ids.size else np.zeros((0, self.alphabet.size + 1), np.uint32)

    def tables_for_positions(self, start: int, stop: int) -> np.ndarray:
        return self.tables_for_ids(self.inverse[start:stop])

    def table(self, position: int) -> QuantizedCdf:
        return QuantizedCdf(self.alphabet, self.tables_for_positions(position, position + 1)[0])


def _check_alphabet(y: np.ndarray, alphabet: Alphabet) -> None:
    bad = np.nonzero((y < alphabet.min_sym) | (y > alphabet.max_sym))[0]
    if bad.size:
        i = int(bad[0])
        raise EncodeError(
            "symbol %d at index %d is outside alphabet %s" % (int(y[i]), i, alphabet)
        )


def _intervals(batch: LatentBatch, mode: CodingMode, alphabet: Alphabet) -> tuple[np.ndarray, np.ndarray]:
    """(start, freq) of every coded symbol in its own quantized table."""
    bank = TableBank(batch.params, mode, alphabet)
    n = len(batch)
    starts = np.empty(n, dtype=np.int64)
    freqs = np.empty(n, dtype=np.int64)
    sym_idx = batch.y_hat - alphabet.min_sym
    # visit distinct tuples in id order so each table is built once
    order = np.argsort(bank.inverse, kind="stable")
    ids_sorted = bank.inverse[order]
    nu = len(bank.unique)
    for lo in range(0, nu, _ENCODE_CHUNK):
        hi = min(lo + _ENCODE_CHUNK, nu)
        tables = build_cdf_tables(bank.rows.take(slice(lo, hi)), alphabet)
        a, b = np.searchsorted(ids_sorted, [lo, hi])
        pos = order[a:b]
        rows = ids_sorted[a:b] - lo
        k = sym_idx[pos]
        s = tables[rows, k].astype(np.int64)
        starts[pos] = s
        freqs[pos] = tables[rows, k + 1].astype(np.int64) - s
    return starts, freqs


def _quantized_bits(freqs: np.ndarray) -> float:
    if freqs.size == 0:
        return 0.0
    return float(np.sum(-np.asarray(ggd_math.ln(freqs / PROB_TOTAL)) * _INV_LN2))


def encode_payload(batch: LatentBatch, mode, alphabet: Alphabet = DEFAULT_ALPHABET) -> tuple[bytes, float]:
    """Range-coded payload and its quantized cross-entropy in bits."""
    mode = CodingMode.parse(mode)
    _check_alphabet(batch.y_hat, alphabet)
    starts, freqs = _intervals(batch, mode, alphabet)
    return encode_intervals(starts.tolist(), freqs.tolist()), _quantized_bits(freqs)


def encode_stream(records, mode, alphabet: Alphabet = DEFAULT_ALPHABET) -> bytes:
    """Container bytes: GGEC header followed by the range-coded payload."""
    batch = as_batch(records)
    mode = CodingMode.parse(mode)
    payload, _ = encode_payload(batch, mode, alphabet)
    header = ContainerHeader(int(mode), alphabet.min_sym, alphabet.max_sym, len(batch), len(payload))
    return formats.pack_container(header, payload)


def read_container(data: bytes) -> tuple[ContainerHeader, CodingMode, Alphabet, bytes]:
    header, payload = formats.unpack_container(data)
    try:
        mode = CodingMode(header.mode)
    except ValueError:
        raise FormatError("container: unknown mode byte %d at offset 5" % header.mode) from None
    if not header.alphabet_min < header.alphabet_max:
        raise FormatError("container: empty alphabet %d:%d at offset 6" % (header.alphabet_min, header.alphabet_max))
    return header, mode, Alphabet(header.alphabet_min, header.alphabet_max), payload


def decode_stream(container: bytes, params, alphabet: Alphabet | None = None) -> np.ndarray:
    """Recover the symbols of an :func:`encode_stream` container.

    ``params`` must be the side information used at encode time.  The
    alphabet is read from the header; if one is passed it must agree.
    """
    header, mode, stored, payload = read_container(container)
    if alphabet is not None and alphabet != stored:
        raise FormatError("container alphabet %s differs from requested %s" % (stored, alphabet))
    params = as_params(params)
    if len(params) != header.count:
        raise FormatError("container holds %d symbols but %d parameter records were given" % (header.count, len(params)))
    bank = TableBank(params, mode, stored)
    dec = RangeDecoder(payload)
    out = np.empty(header.count, dtype=np.int64)
    for lo in range(0, header.count, _DECODE_WINDOW):
        hi = min(lo + _DECODE_WINDOW, header.count)
        tables = bank.tables_for_positions(lo, hi)
        for j in range(hi - lo):
            out[lo + j] = dec.decode(tables[j])
    return out + stored.min_sym


def estimate_bits(records, mode, alphabet: Alphabet = DEFAULT_ALPHABET, quantized: bool = True) -> RateReport:
    """Ideal code length: sum of -log2 of each symbol's real likelihood.

    With ``quantized`` the report also carries the 16-bit-table estimate.
    """
    batch = as_batch(records)
    mode = CodingMode.parse(mode)
    _check_alphabet(batch.y_hat, alphabet)
    rows = batch.params.rows(mode)
    log_like = coded_log_likelihood(rows, batch.y_hat, alphabet) if len(batch) else np.zeros(0)
    bits = -log_like * _INV_LN2
    est = float(np.sum(bits))
    qbits = None
    if quantized:
        _, freqs = _intervals(batch, mode, alphabet)
        qbits = _quantized_bits(freqs)
    return RateReport(mode.label, len(batch), est, qbits, None, bits)
