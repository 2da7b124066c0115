"""
Pratt trees
===========

Each prime p hangs the primes dividing p - 1 beneath it, down to 2.
The height H(p) bounds L(p) from below; the surplus exponents along a
branch account for the gap.
"""

from lamiter.carmichael import big_L
from lamiter.pratt import branch_excess, branches, build_tree, height, level_counts, render_tree

tree = build_tree(3691)
print(render_tree(tree, "json"))
print(render_tree(tree, "dot"))

for primes, alphas in branches(tree):
    print(primes, alphas)

print("H =", height(3691), "L =", big_L(3691), "excess =", branch_excess(3691))

# node counts by depth for a larger prime
p = 1000003
print(level_counts(p), level_counts(p, distinct=True))
