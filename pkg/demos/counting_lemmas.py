"""
Counting chains and exact powers
================================

Integers divisible by a prime that starts a chain of length k ending in
q^alpha, compared with x (c log log x)^k / q^alpha; integers with a large
prime factor to an exact power a; reciprocal sums over primes 1 mod m.
"""

from lamiter import analysis

cal = analysis.calibrate_chains()
print("chain constant", cal.c, "worst at", cal.worst)

x = 10**5
for q, alpha, k in [(2, 3, 1), (2, 3, 2), (3, 2, 2), (5, 1, 3)]:
    print(q, alpha, k, analysis.chain_count(x, q, alpha, k), analysis.chain_bound(x, q, alpha, k, cal.c))

C, where = analysis.calibrate_powers((10**4, 10**5, 10**6))
print("power constant", C, where)
print(analysis.power_exact_divisor_count(100, 5, 2), analysis.power_exact_divisor_count(1000, 5, 3))

print(analysis.bt_recip_sum(10**6, 12))
print(analysis.prop_sweep([10.0**k for k in (4, 8, 12)]))
