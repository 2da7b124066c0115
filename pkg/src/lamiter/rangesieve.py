"""Dense tables of lambda(n), L(n) and H(p) over [1, N], plus a binary format.

lambda is evaluated segment by segment from a shared SPF table; segments are
independent, so they are handed to a thread pool (the kernels release the
GIL).  L is then filled in one ascending pass, ``L[n] = 1 + L[lambda(n)]``,
which only reads entries below ``n``.  Results never depend on the number of
workers.

On-disk layout (little-endian)::

    b"CLT1" | version u8 = 1 | kind u8 | variant u8 | reserved u8 = 0
    | N u64 | payload: N elements for n = 1..N | crc32(payload) u32
"""

from __future__ import annotations

import enum
import os
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .arith import DEFAULT_BUDGET, SpfTable, spf_bytes, spf_sieve
from .carmichael import STANDARD, Variant
from .errors import BadMagicError, ChecksumError, ResourceError, TruncatedTableError

MAGIC = b"CLT1"
VERSION = 1
H_SENTINEL = _kernels.H_SENTINEL
DEFAULT_SEGMENT = 1 << 22

_HEADER = struct.Struct("<4sBBBBQ")


class Kind(enum.IntEnum):
    LAMBDA64 = 0
    L8 = 1
    H8 = 2

    @property
    def dtype(self) -> np.dtype:
        return np.dtype("<u8") if self is Kind.LAMBDA64 else np.dtype("u1")


@dataclass(frozen=True, eq=False)
class RangeTable:
    """Values for ``n = 1..limit``; ``values[0]`` is padding so ``values[n]`` works."""

    kind: Kind
    limit: int
    values: np.ndarray
    variant: Variant = STANDARD

    def __post_init__(self):
        if self.values.shape != (self.limit + 1,):
            raise ValueError("values must have length limit + 1")
        self.values.flags.writeable = False

    def __getitem__(self, n):
        return self.values[n]

    @property
    def payload(self) -> np.ndarray:
        return self.values[1:]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RangeTable):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.limit == other.limit
            and self.variant == other.variant
            and np.array_equal(self.values[1:], other.values[1:])
        )

    __hash__ = None  # type: ignore[assignment]


def default_workers() -> int:
    env = os.environ.get("LAM_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _check_limit(limit: int) -> None:
    if limit < 2:
        raise ValueError("range tables need N >= 2")


def _check_budget(need: int, budget: int, what: str) -> None:
    if need > budget:
        raise ResourceError(f"{what} needs about {need} bytes, budget is {budget}")


def _segments(limit: int, segment: int):
    lo = 1
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        yield lo, hi
        lo = hi


def _lambda_segments(spf: SpfTable, limit: int, variant: Variant, workers: int, segment: int):
    """Yield ``(lo, hi, lambda values)`` in ascending order.

    At most ``workers`` segments are in flight at a time, which bounds the
    scratch memory to ``workers * segment * 8`` bytes.
    """
    two_adic = variant is Variant.TWO_ADIC

    def job(bounds):
        lo, hi = bounds
        out = np.empty(hi - lo, dtype=np.int64)
        _kernels.lambda_segment(spf.spf, lo, hi, two_adic, out)
        return lo, hi, out

    bounds = list(_segments(limit, segment))
    if workers <= 1:
        for b in bounds:
            yield job(b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(bounds), workers):
            yield from pool.map(job, bounds[start : start + workers])


def _spf_for(limit: int, spf: SpfTable | None, budget: int) -> SpfTable:
    if spf is not None and spf.limit >= limit:
        return spf
    return spf_sieve(limit, budget)


def sieve_lambda(
    limit: int,
    variant: Variant = STANDARD,
    *,
    workers: int | None = None,
    budget: int = DEFAULT_BUDGET,
    segment: int = DEFAULT_SEGMENT,
    spf: SpfTable | None = None,
) -> RangeTable:
    _check_limit(limit)
    variant = Variant.parse(variant)
    workers = workers or default_workers()
    _check_budget(spf_bytes(limit) + 8 * (limit + 1) + 8 * workers * segment, budget, "lambda table")
    spf = _spf_for(limit, spf, budget)
    values = np.zeros(limit + 1, dtype=np.uint64)
    for lo, hi, lam in _lambda_segments(spf, limit, variant, workers, segment):
        values[lo:hi] = lam
    return RangeTable(Kind.LAMBDA64, limit, values, variant)


def sieve_L(
    limit: int,
    variant: Variant = STANDARD,
    *,
    workers: int | None = None,
    budget: int = DEFAULT_BUDGET,
    segment: int = DEFAULT_SEGMENT,
    spf: SpfTable | None = None,
) -> RangeTable:
    _check_limit(limit)
    variant = Variant.parse(variant)
    workers = workers or default_workers()
    _check_budget(spf_bytes(limit) + (limit + 1) + 8 * workers * segment, budget, "L table")
    spf = _spf_for(limit, spf, budget)
    L = np.zeros(limit + 1, dtype=np.uint8)
    for lo, hi, lam in _lambda_segments(spf, limit, variant, workers, segment):
        _kernels.L_pass(lam, lo, hi, L)
    return RangeTable(Kind.L8, limit, L, variant)


@dataclass(frozen=True, eq=False)
class PrattTables:
    """Per-prime heights, branch excess and above-cutoff excess (sentinel 255 off primes)."""

    limit: int
    heights: np.ndarray
    excess: np.ndarray
    head_excess: np.ndarray
    head_cut: int


def sieve_pratt(
    limit: int,
    head_cut: int = 0,
    *,
    budget: int = DEFAULT_BUDGET,
    spf: SpfTable | None = None,
) -> PrattTables:
    """Heights and branch excess for every prime ``p <= limit`` in one pass.

    ``head_excess[p]`` sums (alpha - 1) only along the leading edges whose
    child prime exceeds ``head_cut``.
    """
    _check_limit(limit)
    _check_budget(spf_bytes(limit) + 3 * (limit + 1), budget, "Pratt tables")
    spf = _spf_for(limit, spf, budget)
    H = np.full(limit + 1, H_SENTINEL, dtype=np.uint8)
    E = np.full(limit + 1, H_SENTINEL, dtype=np.uint8)
    HE = np.full(limit + 1, H_SENTINEL, dtype=np.uint8)
    _kernels.pratt_pass(spf.spf, limit, H, E, HE, head_cut)
    for arr in (H, E, HE):
        arr.flags.writeable = False
    return PrattTables(limit, H, E, HE, head_cut)


def sieve_heights(
    limit: int,
    *,
    budget: int = DEFAULT_BUDGET,
    spf: SpfTable | None = None,
) -> RangeTable:
    tables = sieve_pratt(limit, budget=budget, spf=spf)
    return RangeTable(Kind.H8, limit, tables.heights.copy())


def write_table(table: RangeTable, path: str | os.PathLike) -> None:
    payload = np.ascontiguousarray(table.payload, dtype=table.kind.dtype).tobytes()
    header = _HEADER.pack(MAGIC, VERSION, int(table.kind), int(table.variant), 0, table.limit)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
        fh.write(struct.pack("<I", zlib.crc32(payload)))


def read_table(path: str | os.PathLike) -> RangeTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        if not MAGIC.startswith(data[:4]):
            raise BadMagicError(f"{path}: not a range table")
        raise TruncatedTableError(f"{path}: header truncated")
    magic, version, kind, variant, _reserved, limit = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise BadMagicError(f"{path}: unsupported version {version}")
    try:
        kind = Kind(kind)
        variant = Variant(variant)
    except ValueError as exc:
        raise BadMagicError(f"{path}: {exc}") from None
    size = limit * kind.dtype.itemsize
    end = _HEADER.size + size
    if len(data) < end + 4:
        raise TruncatedTableError(f"{path}: expected {end + 4} bytes, found {len(data)}")
    payload = data[_HEADER.size : end]
    (crc,) = struct.unpack_from("<I", data, end)
    if zlib.crc32(payload) != crc:
        raise ChecksumError(f"{path}: payload checksum mismatch")
    values = np.zeros(limit + 1, dtype=kind.dtype.newbyteorder("="))
    values[1:] = np.frombuffer(payload, dtype=kind.dtype)
    return RangeTable(kind, limit, values, variant)
