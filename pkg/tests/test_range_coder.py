import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggec.errors import DecodeError, EncodeError
from ggec.interval_model import PROB_TOTAL, Alphabet, QuantizedCdf, quantize_masses
from ggec.range_coder import RangeDecoder, decode_symbols, encode_symbols


def _random_tables(rng, count, k):
    return quantize_masses(rng.dirichlet(np.full(k, 0.2), count))


def _ce_bits(tables, idx):
    t = tables.astype(np.int64)
    f = t[np.arange(len(idx)), idx + 1] - t[np.arange(len(idx)), idx]
    return float(-np.log2(f / PROB_TOTAL).sum())


def test_empty_stream():
    data = encode_symbols([])
    assert len(data) <= 8
    assert decode_symbols([], data, 0) == []


def test_half_probability_symbols():
    table = np.array([0, 32768, 65536], dtype=np.uint32)
    rng = np.random.default_rng(0)
    idx = rng.integers(0, 2, 1024)
    data = encode_symbols((table, i) for i in idx)
    assert len(data) <= 136
    assert decode_symbols([table] * 1024, data, 1024) == idx.tolist()


def test_accepts_quantized_cdf_objects():
    t = QuantizedCdf(Alphabet(0, 2), np.array([0, 100, 60000, 65536], dtype=np.uint32))
    data = encode_symbols([(t, 0), (t, 2), (t, 1)])
    assert decode_symbols([t, t, t], data, 3) == [0, 2, 1]


def test_roundtrip_and_size_bound():
    rng = np.random.default_rng(1)
    pool = _random_tables(rng, 1000, 17)
    which = rng.integers(0, 1000, 100_000)
    tables = pool[which]
    cum = np.cumsum(np.diff(tables.astype(np.int64), axis=1) / PROB_TOTAL, axis=1)
    idx = np.minimum((cum < rng.uniform(size=(len(which), 1))).sum(axis=1), 16)
    data = encode_symbols(zip(tables, idx))
    ce = _ce_bits(tables, idx)
    assert ce <= len(data) * 8 <= ce + 32
    assert len(data) <= math.ceil(ce) / 8 + 8
    out = decode_symbols(lambda i: pool[which[i]], data, len(idx))
    assert out == idx.tolist()


def test_extreme_frequencies_and_carries():
    # frequency-1 symbols force long renormalizations and carry chains
    table = np.array([0, 1, 65535, 65536], dtype=np.uint32)
    rng = np.random.default_rng(2)
    idx = rng.choice([0, 1, 2], p=[0.3, 0.4, 0.3], size=20000)
    data = encode_symbols((table, i) for i in idx)
    assert decode_symbols([table] * len(idx), data, len(idx)) == idx.tolist()


def test_truncated_stream_raises():
    rng = np.random.default_rng(3)
    tables = _random_tables(rng, 500, 9)
    idx = rng.integers(0, 9, 500)
    data = encode_symbols(zip(tables, idx))
    for cut in (0, 3, len(data) // 2, len(data) - 1):
        with pytest.raises(DecodeError):
            decode_symbols(tables, data[:cut], 500)


def test_mismatched_tables_do_not_crash():
    rng = np.random.default_rng(4)
    a, b = _random_tables(rng, 2000, 11), _random_tables(rng, 2000, 11)
    data = encode_symbols(zip(a, rng.integers(0, 11, 2000)))
    try:
        out = decode_symbols(b, data, 2000)
    except DecodeError:
        return
    assert all(0 <= s < 11 for s in out)


def test_decoder_does_not_read_past_slice():
    table = np.array([0, 32768, 65536], dtype=np.uint32)
    data = encode_symbols([(table, 1)] * 64)
    dec = RangeDecoder(data)
    for _ in range(64):
        dec.decode(table)
    assert dec.pos <= len(data)


def test_bad_index():
    table = np.array([0, 32768, 65536], dtype=np.uint32)
    with pytest.raises(EncodeError, match="position 1"):
        encode_symbols([(table, 0), (table, 2)])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_roundtrip_property(data):
    k = data.draw(st.integers(2, 40))
    n = data.draw(st.integers(0, 300))
    weights = data.draw(st.lists(st.floats(0.0, 1.0), min_size=k, max_size=k).filter(lambda w: sum(w) > 0))
    table = quantize_masses(np.array([weights]))[0]
    idx = data.draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    blob = encode_symbols((table, i) for i in idx)
    assert decode_symbols([table] * n, blob, n) == idx
    ce = _ce_bits(np.tile(table, (n, 1)), np.array(idx, dtype=np.int64)) if n else 0.0
    assert ce <= len(blob) * 8 <= ce + 32
