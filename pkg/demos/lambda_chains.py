"""
Iterating the Carmichael function
=================================

lambda(n) is the exponent of the unit group mod n. Applying it repeatedly
always reaches 1; L(n) counts the steps.
"""

from lamiter.carmichael import TWO_ADIC, big_L, carmichael_lambda, lambda_chain, trivial_upper_bound

print(carmichael_lambda(3691), carmichael_lambda(5040))

# the whole chain, then its length
chain = lambda_chain(3691)
print(chain.values, chain.length)

# every step at least halves the odd part or drops a power of two,
# so L(n) never exceeds the bit length of n
for n in (10**6, 2**40, 3**25):
    print(n, big_L(n), trivial_upper_bound(n))

# powers of 3 need one step per exponent, and then one more
print([big_L(3**k) for k in range(1, 13)])

# 2-powers are cheaper under the standard rule lambda(2^a) = 2^(a-2)
print([big_L(2**a) for a in range(1, 11)])
print([big_L(2**a, TWO_ADIC) for a in range(1, 11)])
