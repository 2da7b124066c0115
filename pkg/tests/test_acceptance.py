"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import math
import time

import numpy as np
import pytest
import sympy

from lamiter import analysis, model, verify
from lamiter.carmichael import STANDARD, TWO_ADIC, big_L, carmichael_lambda, group_exponent_bruteforce
from lamiter.rangesieve import sieve_heights, sieve_L

from conftest import ACCEPTANCE_LINES


def record(num, title, checks):
    ok = all(c.passed for c in checks)
    detail = "; ".join(f"{c.name}: {c.detail}" if c.detail else c.name for c in checks)
    ACCEPTANCE_LINES.append(f"[{num:2d}] {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
    failed = [c.line() for c in checks if not c.passed]
    assert ok, failed


Check = verify.Check


def test_01_lambda_oracle():
    t0 = time.perf_counter()
    bad = [n for n in range(1, 10**4 + 1) if carmichael_lambda(n) != group_exponent_bruteforce(n)]
    dt = time.perf_counter() - t0
    sym = [n for n in range(1, 10**4 + 1, 13) if carmichael_lambda(n) != int(sympy.reduced_totient(n))]
    record(1, "lambda equals brute-force group exponent, n <= 1e4", [
        Check("mismatches", not bad, str(len(bad))),
        Check("time < 60 s", dt < 60, f"{dt:.1f}s"),
        Check("sympy cross-check", not sym),
    ])


def test_02_trivial_bound():
    t0 = time.perf_counter()
    L = sieve_L(10**7)
    n = np.arange(1, 10**7 + 1, dtype=np.int64)
    bound = np.floor(np.log2(n.astype(np.float64))).astype(np.int64) + 1
    # float log2 can round up just below a power of two; fix those exactly
    over = np.flatnonzero(L.payload.astype(np.int64) > bound)
    over = [int(k) + 1 for k in over if (int(k) + 1).bit_length() < L.payload[k]]
    dt = time.perf_counter() - t0
    record(2, "L(n) <= floor(log2 n) + 1, n <= 1e7", [
        Check("violations", not over, str(len(over))),
        Check("time < 60 s", dt < 60, f"{dt:.1f}s"),
    ])


def test_03_prime_breakdown():
    checks = []
    for variant in (STANDARD, TWO_ADIC):
        L = sieve_L(10**5, variant, workers=1)
        cache = {}

        def Lpa(p, a):
            if (p, a) not in cache:
                cache[(p, a)] = big_L(p**a, variant)
            return cache[(p, a)]

        bad = [
            n for n in range(2, 10**5 + 1)
            if int(L[n]) != max(Lpa(p, a) for p, a in sympy.factorint(n).items())
        ]
        checks.append(Check(variant.name.lower(), not bad, f"mismatches={len(bad)}"))
    record(3, "L(n) = max over exact prime powers, n <= 1e5", checks)


def test_04_powers_identity():
    bad, tested = [], 0
    for p in sympy.primerange(3, 201):
        Lp = big_L(p)
        a = 1
        while p**a <= 10**9:
            tested += 1
            if big_L(p**a) != a - 1 + Lp:
                bad.append((p, a))
            a += 1
    record(4, "L(p^a) = a - 1 + L(p), odd p <= 200, p^a <= 1e9", [
        Check("odd primes", not bad, f"tested={tested} bad={bad[:3]}"),
        Check("exception L(8) = 2 != 3", big_L(8) == 2 and 3 - 1 + big_L(2) == 3),
    ])


def test_05_pratt_relations():
    record(5, "H(p) < L(p) and 2^(prod alpha) < p, primes <= 1e5", verify.pratt_relations(10**5))


def test_06_worked_example():
    record(6, "Pratt tree of 3691, H = 3, L = 5", verify.worked_example())


def test_07_powers_of_three(L_1e6):
    bad = [k for k in range(1, 13) if big_L(3**k) != k + 1]
    mx = int(L_1e6.values.max())
    record(7, "L(3^k) = k + 1 for k <= 12, max L over [1, 1e6] >= 13", [
        Check("3^k", not bad, f"bad={bad}"),
        Check("max L", mx >= 13, f"max={mx}"),
    ])


def test_08_dickman():
    from scipy.integrate import quad

    t0 = time.perf_counter()
    checks = verify.dickman()
    # second independent route for rho(3): closed form on [2, 3]
    r3 = 1 - math.log(3) + quad(lambda t: math.log(t - 1) / t, 2, 3, epsabs=1e-14)[0]
    err = abs(analysis.dickman_rho(3.0) - r3)
    dt = time.perf_counter() - t0
    checks += [Check("rho(3) vs quad", err <= 1e-6, f"err={err:.1e}"), Check("time < 60 s", dt < 60, f"{dt:.1f}s")]
    record(8, "Dickman rho and Psi(1e6, 1e3)", checks)


def test_09_lemma_chains():
    record(9, "chain_count <= chain_bound with one c <= 10; brute force at x <= 1e4", verify.lemma_chains())


def test_10_lemma_powers():
    record(10, "exact-power count <= C x / Y^(a-1) with C <= 4", verify.lemma_powers())


def test_11_coefficients():
    m2 = model.coefficient_max(math.log(2))
    m3 = model.coefficient_max(math.log(3))
    record(11, "coefficient maxima at D = ln 2 and ln 3", [
        Check("D = ln 2", abs(m2.c_star - 2) <= 1e-6 and abs(m2.f_star - 2 / math.log(2)) <= 1e-6,
              f"({m2.c_star:.9f}, {m2.f_star:.9f})"),
        Check("D = ln 3 sup = e", abs(m3.f_star - math.e) <= 1e-12, f"{m3.f_star!r}"),
    ])


def test_12_prop_sweep():
    xs = [10.0**k for k in range(3, 13)]
    ratios = []
    for x in xs:
        lx = math.log(x)
        psi = 3 * math.log(math.log(lx))  # three-fold iterated log
        log_direct = (lx**0.95 + 1) * math.log(2 * math.log(lx)) - (lx**0.95 * psi - 2) * math.log(2)
        ratios.append(math.exp(log_direct))
    lib = [r for _, r in analysis.prop_sweep(xs)]
    record(12, "proposition bound / x decreasing, < 1e-3 at 1e12", [
        Check("matches direct formula", np.allclose(lib, ratios, rtol=1e-9), f"max rel err={max(abs(a / b - 1) for a, b in zip(lib, ratios)):.1e}"),
        Check("monotone", all(b < a for a, b in zip(lib, lib[1:]))),
        Check("ratio at 1e12", lib[-1] < 1e-3, f"{lib[-1]:.3e}"),
    ])


@pytest.mark.slow
def test_13_sieve_scale():
    record(13, "sieve_L(1e8): time, memory, determinism, spot checks", verify.sieve_scale())


def test_14_distribution(L_1e6):
    small = analysis.small_L_set(L_1e6, 2)
    L = sieve_L(10**7)
    rep = analysis.distribution_report(L, sieve_heights(10**7))
    cols = " ".join(f"{r.x:.0e}:{r.mean_L_over_y:.4f}" for r in rep.rows)
    record(14, "{n <= 1e6 : L(n) <= 2} and mean_L_over_y per decade", [
        Check("small set", small == [1, 2, 3, 4, 6, 8, 12, 24], str(small)),
        Check("decades 1e3..1e7", [r.x for r in rep.rows] == [10**k for k in range(3, 8)], cols),
    ])
