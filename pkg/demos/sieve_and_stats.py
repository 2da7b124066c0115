"""
Sieving L over a range
======================

A dense L table for n <= N, its binary round trip, and the per-decade
distribution report.
"""

import tempfile
from pathlib import Path

import numpy as np

from lamiter.analysis import distribution_report, small_L_set
from lamiter.rangesieve import read_table, sieve_heights, sieve_L, write_table

N = 10**6
L = sieve_L(N)
H = sieve_heights(N)

print(np.bincount(L.payload))  # how many n take each number of steps
print(small_L_set(L, 2))

with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "L.clt"
    write_table(L, path)
    print(path.stat().st_size, read_table(path) == L)

rep = distribution_report(L, H)
print(rep.to_csv())
print(rep.excess_histogram)
