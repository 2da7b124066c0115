import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lamiter.carmichael import (
    STANDARD,
    TWO_ADIC,
    L_by_prime_powers,
    L_two_power,
    Variant,
    big_L,
    carmichael_lambda,
    group_exponent_bruteforce,
    lambda_chain,
    lambda_prime_power,
    trivial_upper_bound,
)


def iterate_L(n, lam):
    k = 0
    while n != 1:
        n = lam(n)
        k += 1
    return k


@pytest.mark.parametrize(
    "p,k,variant,expected",
    [(3, 1, STANDARD, 2), (2, 3, STANDARD, 2), (2, 3, TWO_ADIC, 4), (2, 1, STANDARD, 1), (2, 2, STANDARD, 2)],
)
def test_lambda_prime_power_examples(p, k, variant, expected):
    assert lambda_prime_power(p, k, variant) == expected


def test_variants_agree_off_high_powers_of_two():
    for p in (2, 3, 5, 7, 11, 101):
        for k in range(1, 6):
            if p == 2 and k >= 3:
                assert lambda_prime_power(2, k, TWO_ADIC) == 2 * lambda_prime_power(2, k, STANDARD)
            else:
                assert lambda_prime_power(p, k, TWO_ADIC) == lambda_prime_power(p, k, STANDARD)


def test_lambda_prime_power_rejects():
    with pytest.raises(ValueError):
        lambda_prime_power(4, 1)
    with pytest.raises(OverflowError):
        lambda_prime_power(3, 41)


@pytest.mark.parametrize("n,expected", [(1, 1), (24, 2), (3690, 120), (8, 2), (9, 6), (10, 4)])
def test_carmichael_examples(n, expected):
    assert carmichael_lambda(n) == expected


def test_bruteforce_examples():
    assert group_exponent_bruteforce(24) == 2
    assert group_exponent_bruteforce(1) == 1
    assert group_exponent_bruteforce(3690) == 120


def test_carmichael_matches_bruteforce_below_2000():
    for n in range(1, 2001):
        assert carmichael_lambda(n) == group_exponent_bruteforce(n)


@given(st.integers(1, 2**62))
@settings(max_examples=200, deadline=None)
def test_carmichael_matches_sympy(n):
    assert carmichael_lambda(n) == sympy.reduced_totient(n)


@given(st.integers(1, 2000), st.integers(1, 2000))
def test_lambda_of_lcm(a, b):
    lam = carmichael_lambda
    l = a * b // math.gcd(a, b)
    lab = lam(a) * lam(b) // math.gcd(lam(a), lam(b))
    assert lam(l) == lab


@pytest.mark.parametrize(
    "n,values",
    [(1, [1]), (3691, [3691, 3690, 120, 4, 2, 1]), (9, [9, 6, 2, 1])],
)
def test_lambda_chain_examples(n, values):
    chain = lambda_chain(n)
    assert list(chain.values) == values
    assert chain.length == len(values) - 1


@given(st.integers(2, 10**12), st.sampled_from([STANDARD, TWO_ADIC]))
@settings(max_examples=200, deadline=None)
def test_lambda_chain_invariants(n, variant):
    vals = lambda_chain(n, variant).values
    assert vals[-1] == 1
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(v % 2 == 0 or v == 1 for v in vals[1:])
    assert all(carmichael_lambda(a, variant) == b for a, b in zip(vals, vals[1:]))
    assert len(vals) - 1 <= trivial_upper_bound(n)


@pytest.mark.parametrize(
    "n,variant,expected",
    [(1, STANDARD, 0), (531441, STANDARD, 13), (3691, STANDARD, 5), (8, TWO_ADIC, 3), (8, STANDARD, 2)],
)
def test_big_L_examples(n, variant, expected):
    assert big_L(n, variant) == expected


def test_big_L_matches_sympy_iteration():
    for n in range(1, 3000):
        assert big_L(n) == iterate_L(n, sympy.reduced_totient)


@pytest.mark.parametrize("n,expected", [(2, 2), (8, 4), (3691, 12), (2**63, 64), (2**64 - 1, 64)])
def test_trivial_upper_bound(n, expected):
    assert trivial_upper_bound(n) == expected
    if n < 2**50:
        assert expected == math.floor(math.log(n) / math.log(2) + 1)


def test_trivial_upper_bound_holds_below_1e6(L_1e6):
    import numpy as np

    n = np.arange(2, 10**6 + 1)
    bl = np.frexp(n.astype(float))[1]
    assert (L_1e6.values[2:] <= bl).all()


def test_two_power_closed_form():
    for a in range(1, 64):
        assert big_L(1 << a) == L_two_power(a) == a // 2 + 1


def test_prime_breakdown_small():
    for variant in (STANDARD, TWO_ADIC):
        for n in range(1, 5000):
            assert big_L(n, variant) == L_by_prime_powers(n, variant)


def test_powers_identity_odd_and_its_failure_at_two():
    for p in (3, 5, 7, 11, 13, 97, 199):
        for a in range(1, 7):
            if p**a < 2**63:
                assert big_L(p**a) == a - 1 + big_L(p)
    assert big_L(8) == 2 != 2 + big_L(2)


def test_small_L_set():
    small = [n for n in range(1, 2000) if big_L(n) <= 2]
    assert small == [1, 2, 3, 4, 6, 8, 12, 24]


def test_variant_parse():
    assert Variant.parse("two-adic") is TWO_ADIC
    assert Variant.parse("standard") is STANDARD
    assert Variant.parse(1) is TWO_ADIC
    with pytest.raises(ValueError):
        Variant.parse("odd")
