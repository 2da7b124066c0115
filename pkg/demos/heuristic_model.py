"""
The heuristic coefficient
=========================

f(c) = c + c log(e/c)/D peaks at c = e^D when D < 1 and at c = e otherwise.
"""

import math

from lamiter import model

for q in (2, 3, 5):
    D = math.log(q)
    print(q, model.coefficient_max(D), model.coefficient_max(model.denominator(q)))

curve = model.CoefficientCurve.sample(math.log(2), 8)
print(curve.c.round(3), curve.f.round(3))

print(model.prob_no_hit(6, 3, 2), model.prob_no_hit(10**6, 1000003, 1))
print([round(model.expected_level_size(math.log(math.log(10**6)), n), 3) for n in range(6)])

rep = model.excess_report(10**5)
print(rep.histogram(), rep.mean_excess)
print(rep.to_csv())
