import struct

import numpy as np
import pytest

from ggec import formats
from ggec.codec import (
    LatentBatch,
    LatentRecord,
    ParamTable,
    TableBank,
    decode_stream,
    encode_payload,
    encode_stream,
    estimate_bits,
)
from ggec.errors import EncodeError, FormatError
from ggec.interval_model import Alphabet, CodingMode, SymbolParams, build_cdf_table


def _records(symbols, mu=0.0, sigma=1.0, beta=1.0, pi=0.5):
    return [LatentRecord(s, SymbolParams(mu, sigma, beta, pi)) for s in symbols]


def _random_batch(rng, n, alphabet=Alphabet(-255, 255)):
    mu = rng.uniform(-20, 20, n)
    sigma = np.exp(rng.uniform(-3, 3, n))
    y = np.clip(np.round(mu + rng.laplace(0, sigma)), alphabet.min_sym, alphabet.max_sym)
    return LatentBatch(y.astype(np.int64), ParamTable(mu, sigma, rng.uniform(0.25, 4, n), rng.uniform(0, 1, n)))


def test_small_roundtrip():
    c = encode_stream(_records([0, 0, 0]), "dynamic-ggd")
    params = ParamTable.from_params(SymbolParams(0, 1, 1, 0.5) for _ in range(3))
    assert decode_stream(c, params).tolist() == [0, 0, 0]


def test_degenerate_modes_byte_identical():
    recs = _records([0, 0, 0])
    a = encode_stream(recs, "dynamic-ggd")
    b = encode_stream(recs, "fixed-laplacian")
    assert a[formats.ContainerHeader.SIZE :] == b[formats.ContainerHeader.SIZE :]
    assert a[5] == 3 and b[5] == 1
    ea, eb = estimate_bits(recs, "dynamic-ggd"), estimate_bits(recs, "fixed-laplacian")
    assert ea.estimated_bits == eb.estimated_bits


@pytest.mark.parametrize("mode", list(CodingMode))
def test_roundtrip_every_mode(mode):
    rng = np.random.default_rng(int(mode) + 10)
    batch = _random_batch(rng, 3000)
    c = encode_stream(batch, mode)
    assert np.array_equal(decode_stream(c, batch.params), batch.y_hat)
    assert encode_stream(batch, mode) == c


def test_container_header_layout():
    batch = _random_batch(np.random.default_rng(0), 10, Alphabet(-30, 40))
    c = encode_stream(batch, CodingMode.PRELIMINARY, Alphabet(-30, 40))
    magic, ver, mode, amin, amax, count, plen = struct.unpack_from("<4sBBhhQQ", c)
    assert (magic, ver, mode, amin, amax, count) == (b"GGEC", 1, 4, -30, 40, 10)
    assert plen == len(c) - 26


def test_size_matches_quantized_estimate():
    rng = np.random.default_rng(1)
    batch = _random_batch(rng, 100_000)
    payload, qbits = encode_payload(batch, CodingMode.FIXED_LAPLACIAN)
    assert qbits <= len(payload) * 8 <= qbits + 64
    rep = estimate_bits(batch, CodingMode.FIXED_LAPLACIAN)
    assert rep.quantized_bits == qbits


def test_estimate_one_bit():
    # mu = 0.5 rounds to 1; with a tiny scale half the mass falls on each symbol
    rep = estimate_bits(_records([1], mu=0.5, sigma=1e-3, beta=1.0), "fixed-laplacian", Alphabet(0, 1))
    assert abs(rep.estimated_bits - 1.0) < 1e-12


def test_estimate_monotone_in_likelihood():
    base = estimate_bits(_records([3, 0], sigma=2.0), "fixed-ggd").estimated_bits
    closer = estimate_bits([LatentRecord(3, SymbolParams(2.0, 2.0, 1.0, 0.5)), LatentRecord(0, SymbolParams(0, 2.0, 1.0, 0.5))], "fixed-ggd")
    assert closer.estimated_bits <= base


def test_estimate_is_sum_of_log_likelihoods():
    batch = _random_batch(np.random.default_rng(6), 2000)
    rep = estimate_bits(batch, "dynamic-ggd", quantized=False)
    for i, rec in enumerate(list(batch)[:50]):
        single = estimate_bits([rec], "dynamic-ggd", quantized=False)
        assert abs(rep.symbol_bits[i] - single.estimated_bits) < 1e-9
    assert np.all(np.isfinite(rep.symbol_bits))
    assert abs(rep.estimated_bits - float(rep.symbol_bits.sum())) < 1e-6 * rep.estimated_bits
    ok = rep.likelihoods > 1e-300
    assert np.allclose(-np.log2(rep.likelihoods[ok]), rep.symbol_bits[ok], rtol=1e-12)


def test_out_of_alphabet_names_index():
    recs = _records([0, 3, 300, 1])
    with pytest.raises(EncodeError, match="index 2"):
        encode_stream(recs, "fixed-ggd")


def test_corrupt_magic_and_version():
    c = bytearray(encode_stream(_records([1, 2]), "fixed-ggd"))
    params = ParamTable.from_params(r.params for r in _records([1, 2]))
    bad = bytes(b"XGEC") + bytes(c[4:])
    with pytest.raises(FormatError, match="magic"):
        decode_stream(bad, params)
    c2 = bytes(c[:4]) + b"\x02" + bytes(c[5:])
    with pytest.raises(FormatError, match="version"):
        decode_stream(c2, params)
    c3 = bytes(c[:5]) + b"\x09" + bytes(c[6:])
    with pytest.raises(FormatError, match="mode"):
        decode_stream(c3, params)
    with pytest.raises(FormatError, match="payload_len"):
        decode_stream(bytes(c[:-1]), params)


def test_count_mismatch_before_decoding(monkeypatch):
    c = encode_stream(_records([1, 2, 3]), "fixed-ggd")
    params = ParamTable.from_params(r.params for r in _records([1, 2]))
    import ggec.codec as codec

    def boom(*a, **k):
        raise AssertionError("decoder constructed")

    monkeypatch.setattr(codec, "RangeDecoder", boom)
    with pytest.raises(FormatError, match="3 symbols but 2"):
        decode_stream(c, params)


def test_params_bytes_roundtrip_and_f32():
    p = ParamTable([0.1, -3.3], [1.7, 0.2], [0.5, 2.0], [0.3, 0.9])
    q = ParamTable.from_bytes(p.to_bytes())
    for col in ("mu", "sigma", "beta", "pi"):
        assert np.array_equal(getattr(p, col), getattr(q, col))
    assert p.mu[0] == float(np.float32(0.1))


def test_params_csv_variant():
    text = b"mu,sigma,beta,pi\n0.1,1.7,0.5,0.3\n-3.3,0.2,2,0.9\n"
    q = ParamTable.from_bytes(text)
    assert len(q) == 2 and q.beta[1] == 2.0
    with pytest.raises(FormatError, match="header"):
        ParamTable.from_bytes(b"a,b,c,d\n1,2,3,4\n")
    with pytest.raises(FormatError, match="line 2"):
        ParamTable.from_bytes(b"mu,sigma,beta,pi\n1,2,3\n")


def test_symbols_format():
    blob = formats.pack_symbols([1, -2, 300])
    assert blob[:4] == b"GGSY" and blob[4] == 1 and struct.unpack_from("<Q", blob, 5)[0] == 3
    assert formats.unpack_symbols(blob).tolist() == [1, -2, 300]
    with pytest.raises(FormatError, match="count"):
        formats.unpack_symbols(blob[:-1])
    with pytest.raises(FormatError):
        formats.pack_symbols([40000])


def test_write_atomic(tmp_path):
    path = tmp_path / "x.bin"
    formats.write_atomic(path, b"abc")
    formats.write_atomic(path, b"defg")
    assert path.read_bytes() == b"defg"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["x.bin"]


def test_table_bank_matches_direct_build():
    batch = _random_batch(np.random.default_rng(7), 50)
    bank = TableBank(batch.params, "dynamic-ggd", Alphabet(-255, 255), limit=8)
    for i in range(50):
        direct = build_cdf_table(batch.params[i], "dynamic-ggd")
        assert np.array_equal(bank.table(i).cdf, direct.cdf)


def test_batch_validation():
    with pytest.raises(FormatError):
        LatentBatch(np.array([1, 2]), ParamTable([0.0], [1.0], [1.0], [0.5]))
    with pytest.raises(EncodeError):
        LatentBatch(np.array([1.5]), ParamTable([0.0], [1.0], [1.0], [0.5]))
