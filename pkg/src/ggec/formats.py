"""On-disk layouts: GGSY symbols, GGPR parameters, GGEC containers.

All integers are little-endian.

    GGSY  magic(4) version(1) count(u64)  count x int16
    GGPR  magic(4) version(1) count(u64)  count x (mu, sigma, beta, pi) float32
    GGEC  magic(4) version(1) mode(u8) alphabet_min(i16) alphabet_max(i16)
          count(u64) payload_len(u64) payload
"""

from __future__ import annotations

import csv
import io
import os
import struct
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

VERSION = 1
SYMBOLS_MAGIC = b"GGSY"
PARAMS_MAGIC = b"GGPR"
CONTAINER_MAGIC = b"GGEC"
CSV_HEADER = ["mu", "sigma", "beta", "pi"]

_COUNT_HEADER = struct.Struct("<4sBQ")
_CONTAINER_HEADER = struct.Struct("<4sBBhhQQ")


def _check_magic(data: bytes, magic: bytes, what: str) -> None:
    if len(data) < len(magic) or data[: len(magic)] != magic:
        raise FormatError("%s: bad magic at offset 0 (expected %r, got %r)" % (what, magic, bytes(data[:4])))
    if len(data) < len(magic) + 1:
        raise FormatError("%s: missing version byte at offset 4" % what)
    if data[4] != VERSION:
        raise FormatError("%s: unsupported version %d at offset 4" % (what, data[4]))


def _read_counted(data: bytes, magic: bytes, what: str, item_size: int) -> tuple[int, memoryview]:
    _check_magic(data, magic, what)
    if len(data) < _COUNT_HEADER.size:
        raise FormatError("%s: header truncated at offset %d" % (what, len(data)))
    _, _, count = _COUNT_HEADER.unpack_from(data)
    body = memoryview(data)[_COUNT_HEADER.size :]
    if len(body) != count * item_size:
        raise FormatError(
            "%s: count field says %d records (%d bytes) but %d bytes follow offset %d"
            % (what, count, count * item_size, len(body), _COUNT_HEADER.size)
        )
    return count, body


def pack_symbols(symbols) -> bytes:
    sym = np.asarray(symbols)
    if sym.size and (sym.min() < -32768 or sym.max() > 32767):
        raise FormatError("symbols file stores int16; value out of range")
    return _COUNT_HEADER.pack(SYMBOLS_MAGIC, VERSION, sym.size) + sym.astype("<i2").tobytes()


def unpack_symbols(data: bytes) -> np.ndarray:
    _, body = _read_counted(data, SYMBOLS_MAGIC, "symbols file", 2)
    return np.frombuffer(body, dtype="<i2").astype(np.int64)


def pack_params(mu, sigma, beta, pi) -> bytes:
    cols = np.stack([np.asarray(c, dtype=np.float64) for c in (mu, sigma, beta, pi)], axis=1).astype("<f4")
    return _COUNT_HEADER.pack(PARAMS_MAGIC, VERSION, cols.shape[0]) + cols.tobytes()


def unpack_params(data: bytes) -> np.ndarray:
    """Return an (n, 4) float32 array of (mu, sigma, beta, pi); accepts binary or CSV."""
    if bytes(data[:4]) != PARAMS_MAGIC:
        return _parse_params_csv(data)
    count, body = _read_counted(data, PARAMS_MAGIC, "params file", 16)
    return np.frombuffer(body, dtype="<f4").reshape(count, 4).astype(np.float32)


def _parse_params_csv(data: bytes) -> np.ndarray:
    try:
        text = bytes(data).decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError("params file: neither GGPR binary nor UTF-8 CSV (bad magic at offset 0)") from None
    reader = csv.reader(io.StringIO(text))
    header = [h.strip() for h in next(reader, [])]
    if header != CSV_HEADER:
        raise FormatError("params CSV: header must be %r, got %r" % (",".join(CSV_HEADER), ",".join(header)))
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise FormatError("params CSV line %d: expected 4 fields, got %d" % (line_no, len(row)))
        try:
            rows.append([float(c) for c in row])
        except ValueError:
            raise FormatError("params CSV line %d: non-numeric field" % line_no) from None
    return np.asarray(rows, dtype=np.float64).reshape(-1, 4).astype(np.float32)


@dataclass(frozen=True)
class ContainerHeader:
    mode: int
    alphabet_min: int
    alphabet_max: int
    count: int
    payload_len: int

    SIZE = _CONTAINER_HEADER.size


def pack_container(header: ContainerHeader, payload: bytes) -> bytes:
    return (
        _CONTAINER_HEADER.pack(
            CONTAINER_MAGIC,
            VERSION,
            header.mode,
            header.alphabet_min,
            header.alphabet_max,
            header.count,
            len(payload),
        )
        + payload
    )


def unpack_container(data: bytes) -> tuple[ContainerHeader, bytes]:
    _check_magic(data, CONTAINER_MAGIC, "container")
    if len(data) < _CONTAINER_HEADER.size:
        raise FormatError("container: header truncated at offset %d" % len(data))
    _, _, mode, amin, amax, count, plen = _CONTAINER_HEADER.unpack_from(data)
    payload = bytes(data[_CONTAINER_HEADER.size :])
    if len(payload) != plen:
        raise FormatError(
            "container: payload_len field (offset 18) says %d bytes, found %d" % (plen, len(payload))
        )
    return ContainerHeader(mode, amin, amax, count, plen), payload


def write_atomic(path: str | os.PathLike, data: bytes) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        # mkstemp creates 0600; give the result ordinary umask permissions
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
