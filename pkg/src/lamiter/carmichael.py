"""The Carmichael function, its iterates and the iteration length L(n).

Two variants are supported.  ``STANDARD`` is the usual exponent of
(Z/nZ)^x, with lambda(2^a) = 2^(a-2) for a >= 3.  ``TWO_ADIC`` replaces the
power-of-two rule by lambda'(2^a) = 2^(a-1) for every a >= 1; the variants
agree on odd prime powers and on 2 and 4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba as nb

from .arith import check_u64, factorize, is_prime


class Variant(enum.IntEnum):
    STANDARD = 0
    TWO_ADIC = 1

    @classmethod
    def parse(cls, value: "Variant | str | int") -> "Variant":
        if isinstance(value, Variant):
            return value
        if isinstance(value, str):
            key = value.strip().lower().replace("-", "_")
            try:
                return cls[key.upper()]
            except KeyError:
                raise ValueError(f"unknown lambda variant {value!r}") from None
        return cls(value)


STANDARD = Variant.STANDARD
TWO_ADIC = Variant.TWO_ADIC


def lambda_prime_power(p: int, k: int, variant: Variant = STANDARD) -> int:
    if k < 1:
        raise ValueError("exponent must be >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    pk = check_u64(p**k, "p**k")
    if p == 2 and k >= 3 and Variant.parse(variant) is STANDARD:
        return pk // 4
    return pk - pk // p


def carmichael_lambda(n: int, variant: Variant = STANDARD) -> int:
    """lcm of :func:`lambda_prime_power` over the factorization of ``n``."""
    if n < 1:
        raise ValueError("carmichael_lambda expects n >= 1")
    variant = Variant.parse(variant)
    result = 1
    for p, k in factorize(n):
        v = lambda_prime_power(p, k, variant)
        result = result // _gcd(result, v) * v
    return check_u64(result, "lambda(n)")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class LambdaChain:
    """``values = [n, lambda(n), lambda_2(n), ..., 1]``."""

    values: tuple[int, ...]
    variant: Variant = STANDARD

    @property
    def length(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def lambda_chain(n: int, variant: Variant = STANDARD) -> LambdaChain:
    variant = Variant.parse(variant)
    if n < 1:
        raise ValueError("lambda_chain expects n >= 1")
    values = [n]
    while values[-1] != 1:
        values.append(carmichael_lambda(values[-1], variant))
    return LambdaChain(tuple(values), variant)


def big_L(n: int, variant: Variant = STANDARD) -> int:
    """Least k >= 0 with lambda_k(n) = 1."""
    return lambda_chain(n, variant).length


def trivial_upper_bound(n: int) -> int:
    """floor(log n / log 2 + 1), i.e. the bit length of ``n``."""
    if n < 2:
        raise ValueError("trivial_upper_bound expects n >= 2")
    return n.bit_length()


def L_two_power(alpha: int) -> int:
    """Closed form L(2^alpha) = floor(alpha/2) + 1 for the standard variant."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    return alpha // 2 + 1


def L_by_prime_powers(n: int, variant: Variant = STANDARD) -> int:
    """max of L(p^a) over the exact prime powers of ``n`` (0 for n = 1)."""
    return max((big_L(p**a, variant) for p, a in factorize(n)), default=0)


@nb.njit(cache=True)
def _powmod(a, e, n):
    r = 1
    a %= n
    while e:
        if e & 1:
            r = r * a % n
        a = a * a % n
        e >>= 1
    return r


@nb.njit(cache=True)
def _exponent_kernel(n):
    exponent = 1
    for a in range(2, n):
        x, y = a, n
        while y:
            x, y = y, x % y
        if x != 1 or _powmod(a, exponent, n) == 1:
            continue
        # order of a by stepping through its powers
        x, order = a, 1
        while x != 1:
            x = x * a % n
            order += 1
        g, y = exponent, order
        while y:
            g, y = y, g % y
        exponent = exponent // g * order
    return exponent


def group_exponent_bruteforce(n: int) -> int:
    """Least m with a^m = 1 (mod n) for every unit a, by direct search.

    Intended as an independent check on :func:`carmichael_lambda`; it never
    factors ``n``.  Only units whose order does not already divide the
    running exponent get their order computed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n >= 1 << 31:
        raise OverflowError("brute-force exponent limited to n < 2**31")
    if n <= 2:
        return 1
    return int(_exponent_kernel(n))
