import struct
import zlib

import numpy as np
import pytest

from lamiter.arith import primes_upto
from lamiter.carmichael import STANDARD, TWO_ADIC, big_L, carmichael_lambda
from lamiter.errors import BadMagicError, ChecksumError, ResourceError, TruncatedTableError
from lamiter.pratt import branch_excess, height
from lamiter.rangesieve import (
    H_SENTINEL,
    Kind,
    RangeTable,
    read_table,
    sieve_heights,
    sieve_L,
    sieve_lambda,
    sieve_pratt,
    write_table,
)


def test_sieve_lambda_examples():
    t = sieve_lambda(10, workers=1)
    assert (t[1], t[8], t[9], t[10]) == (1, 2, 6, 4)
    assert sieve_lambda(4000)[3690] == 120
    assert t.kind is Kind.LAMBDA64


def test_sieve_L_examples(L_1e6):
    t = sieve_L(10)
    assert (t[1], t[2]) == (0, 1)
    assert L_1e6[531441] == 13
    assert sieve_L(4000)[3691] == 5


def test_sieve_heights_examples():
    t = sieve_heights(4000)
    assert (t[2], t[41], t[3691]) == (0, 2, 3)
    assert t[4] == H_SENTINEL and t[1] == H_SENTINEL


@pytest.mark.parametrize("variant", [STANDARD, TWO_ADIC])
def test_pointwise_small(variant):
    N = 5000
    lam = sieve_lambda(N, variant, workers=2, segment=777)
    L = sieve_L(N, variant, workers=3, segment=1000)
    for n in range(1, N + 1):
        assert lam[n] == carmichael_lambda(n, variant)
        assert L[n] == big_L(n, variant)


def test_lambda_strictly_decreases():
    t = sieve_lambda(10**5)
    n = np.arange(2, 10**5 + 1, dtype=np.uint64)
    assert (t.values[2:] < n).all()


def test_heights_and_excess_pointwise():
    N = 20000
    pt = sieve_pratt(N)
    for p in primes_upto(N):
        p = int(p)
        assert pt.heights[p] == height(p)
        assert pt.excess[p] == branch_excess(p)
    composite = np.ones(N + 1, dtype=bool)
    composite[primes_upto(N)] = False
    assert (pt.heights[composite] == H_SENTINEL).all()


def test_worker_count_does_not_change_tables():
    a = sieve_L(300000, workers=1, segment=1 << 14)
    b = sieve_L(300000, workers=5, segment=1 << 14)
    c = sieve_L(300000, workers=2, segment=12345)
    assert a.payload.tobytes() == b.payload.tobytes() == c.payload.tobytes()


def test_max_L_nondecreasing(L_1e6):
    running = np.maximum.accumulate(L_1e6.values[2:])
    assert (np.diff(running.astype(int)) >= 0).all()
    assert L_1e6.values.max() <= 20


def test_tables_are_read_only(L_1e6):
    with pytest.raises(ValueError):
        L_1e6.values[5] = 1


def test_budget_guard():
    with pytest.raises(ResourceError):
        sieve_L(10**7, budget=10**6)
    with pytest.raises(ValueError):
        sieve_L(1)


@pytest.mark.parametrize("kind", ["lambda", "L", "H"])
def test_round_trip(tmp_path, kind):
    t = {"lambda": lambda: sieve_lambda(1000, TWO_ADIC), "L": lambda: sieve_L(10), "H": lambda: sieve_heights(500)}[kind]()
    path = tmp_path / "t.clt"
    write_table(t, path)
    assert read_table(path) == t


def test_binary_layout(tmp_path):
    t = sieve_L(10)
    path = tmp_path / "t.clt"
    write_table(t, path)
    raw = path.read_bytes()
    assert raw[:4] == b"CLT1"
    assert raw[4:8] == bytes([1, 1, 0, 0])
    assert struct.unpack("<Q", raw[8:16]) == (10,)
    payload = raw[16:26]
    assert list(payload) == [big_L(n) for n in range(1, 11)]
    assert struct.unpack("<I", raw[26:30]) == (zlib.crc32(payload),)
    assert len(raw) == 30


def test_lambda64_is_little_endian(tmp_path):
    t = sieve_lambda(10)
    write_table(t, tmp_path / "l.clt")
    raw = (tmp_path / "l.clt").read_bytes()
    assert raw[5] == 0
    assert struct.unpack("<10Q", raw[16:96]) == tuple(carmichael_lambda(n) for n in range(1, 11))


def test_corrupt_magic(tmp_path):
    path = tmp_path / "t.clt"
    write_table(sieve_L(10), path)
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(BadMagicError):
        read_table(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "t.clt"
    write_table(sieve_L(100), path)
    path.write_bytes(path.read_bytes()[:-10])
    with pytest.raises(TruncatedTableError):
        read_table(path)


def test_checksum_mismatch(tmp_path):
    path = tmp_path / "t.clt"
    write_table(sieve_L(100), path)
    raw = bytearray(path.read_bytes())
    raw[20] ^= 1
    path.write_bytes(bytes(raw))
    with pytest.raises(ChecksumError):
        read_table(path)


def test_range_table_shape_check():
    with pytest.raises(ValueError):
        RangeTable(Kind.L8, 10, np.zeros(5, dtype=np.uint8))
