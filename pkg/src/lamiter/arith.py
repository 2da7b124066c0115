"""Integer primitives: primality, factorization, lcm and an SPF sieve.

Everything here works on Python ints but refuses values outside the
unsigned 64-bit range, so that downstream tables never see a silently
wrapped value.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import ResourceError

U64_MAX = (1 << 64) - 1

#: Default memory budget for dense tables (bytes).
DEFAULT_BUDGET = 2 * 1024**3

# Deterministic for every n < 3.3e24, which covers the full 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 1 << 12


def check_u64(value: int, what: str = "value") -> int:
    if value < 0 or value > U64_MAX:
        raise OverflowError(f"{what} {value} outside the unsigned 64-bit range")
    return value


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test for ``0 <= n < 2**64``."""
    check_u64(n, "n")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __eq__(self, other) -> bool:
        if isinstance(other, Factorization):
            return self.factors == other.factors
        try:
            return self.factors == tuple(tuple(f) for f in other)
        except TypeError:
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n


@dataclass(frozen=True, eq=False)
class SpfTable:
    """Smallest-prime-factor lookup for ``2 <= n <= limit``.

    ``spf[1] == 1`` and ``spf[0] == 0`` by convention. The backing array is
    marked read-only so the table can be shared between threads.
    """

    limit: int
    spf: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise IndexError(f"{n} outside SPF table range [2, {self.limit}]")
        return int(self.spf[n])

    def __contains__(self, n: int) -> bool:
        return 2 <= n <= self.limit

    def factorize(self, n: int) -> Factorization:
        if n == 1:
            return Factorization(())
        if n not in self:
            raise IndexError(f"{n} outside SPF table range [2, {self.limit}]")
        out = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return Factorization(tuple(out))

    def is_prime(self, n: int) -> bool:
        return n in self and int(self.spf[n]) == n


def spf_bytes(limit: int) -> int:
    return 4 * (limit + 1)


def spf_sieve(limit: int, budget: int = DEFAULT_BUDGET) -> SpfTable:
    """Build a smallest-prime-factor table for all ``n <= limit``.

    Raises :class:`ResourceError` if the table would not fit in ``budget``
    bytes or if ``limit`` does not fit the 32-bit entries.
    """
    if limit < 2:
        raise ValueError("SPF sieve limit must be at least 2")
    if limit >= 1 << 32:
        raise ResourceError("SPF tables are limited to n < 2**32")
    if spf_bytes(limit) > budget:
        raise ResourceError(
            f"SPF table for N={limit} needs {spf_bytes(limit)} bytes, budget is {budget}"
        )
    spf = _kernels.spf_table(limit)
    spf.flags.writeable = False
    return SpfTable(limit, spf)


_default_table: SpfTable | None = None
_DEFAULT_TABLE_LIMIT = 1 << 20


def default_spf_table() -> SpfTable:
    """Lazily built SPF table used by :func:`factorize` for small inputs."""
    global _default_table
    if _default_table is None:
        _default_table = spf_sieve(_DEFAULT_TABLE_LIMIT)
    return _default_table


def set_default_spf_table(table: SpfTable | None) -> None:
    """Install a larger (or smaller) SPF table for :func:`factorize`."""
    global _default_table
    _default_table = table


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


def factorize(n: int, table: SpfTable | None = None) -> Factorization:
    """Factor ``1 <= n < 2**64``.

    Uses SPF lookups when ``n`` is covered by ``table`` (or the default
    table), otherwise trial division by small primes followed by
    Pollard-Brent on the cofactor.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    check_u64(n, "n")
    if n == 1:
        return Factorization(())
    table = table if table is not None else default_spf_table()
    if n in table:
        return table.factorize(n)

    found: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    d = 5
    while d < _TRIAL_LIMIT and d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                found[p] = found.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        if n in table or d * d > n:
            if n in table:
                for p, e in table.factorize(n):
                    found[p] = found.get(p, 0) + e
            else:
                found[n] = found.get(n, 0) + 1
        else:
            # fixed seed keeps factorization order-independent of global state
            _split(n, found, random.Random(n))
    return Factorization(tuple(sorted(found.items())))


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def lcm(a: int, b: int) -> int:
    """Least common multiple of positive ints, checked against 2**64."""
    if a < 1 or b < 1:
        raise ValueError("lcm expects positive integers")
    return check_u64(a // math.gcd(a, b) * b, "lcm")


def totient_prime_power(p: int, k: int) -> int:
    """phi(p**k) = p**k - p**(k-1)."""
    if k < 1:
        raise ValueError("exponent must be >= 1")
    pk = check_u64(p**k, "p**k")
    return pk - pk // p


def primes_upto(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array ``m`` of length ``limit + 1`` with ``m[n]`` iff n prime."""
    mask = np.zeros(limit + 1, dtype=bool)
    mask[primes_upto(limit)] = True
    return mask


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n
