"""
Smooth numbers and the Dickman function
=======================================
"""

import numpy as np

from lamiter.analysis import dickman_rho, smooth_count

u = np.array([1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 8.0])
print(np.column_stack([u, dickman_rho(u)]))

# Psi(x, x^(1/u)) against x rho(u)
x = 10**6
for u in (2, 3, 4):
    z = round(x ** (1 / u))
    print(u, z, smooth_count(x, z), x * dickman_rho(u))
