"""Compiled inner loops for the sieves.

Every kernel is ``nogil`` so the range sieves can fan segments out over a
thread pool without going through numba's own threading layer.
"""

import numba as nb
import numpy as np

H_SENTINEL = 255


@nb.njit(cache=True, nogil=True)
def spf_table(limit):
    spf = np.zeros(limit + 1, dtype=np.uint32)
    if limit >= 1:
        spf[1] = 1
    p = 2
    while p * p <= limit:
        if spf[p] == 0:
            for m in range(p * p, limit + 1, p):
                if spf[m] == 0:
                    spf[m] = p
        p += 1
    for n in range(2, limit + 1):
        if spf[n] == 0:
            spf[n] = n
    return spf


@nb.njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@nb.njit(cache=True, nogil=True)
def lambda_from_spf(n, spf, two_adic):
    res = np.int64(1)
    m = np.int64(n)
    while m > 1:
        p = np.int64(spf[m])
        k = 0
        pk = np.int64(1)
        while m % p == 0:
            m //= p
            pk *= p
            k += 1
        if p == 2:
            if two_adic or k <= 2:
                v = pk // 2
            else:
                v = pk // 4
        else:
            v = (pk // p) * (p - 1)
        res = (res // _gcd(res, v)) * v
    return res


@nb.njit(cache=True, nogil=True)
def lambda_segment(spf, lo, hi, two_adic, out):
    """Fill ``out[i] = lambda(lo + i)`` for ``lo + i < hi``."""
    for n in range(lo, hi):
        out[n - lo] = lambda_from_spf(n, spf, two_adic)


@nb.njit(cache=True, nogil=True)
def L_pass(lam_seg, lo, hi, L):
    # lambda(n) < n for n >= 2, so L[lambda(n)] is always filled already
    for n in range(lo, hi):
        if n == 1:
            L[1] = 0
        else:
            L[n] = L[lam_seg[n - lo]] + 1


@nb.njit(cache=True, nogil=True)
def pratt_pass(spf, limit, H, excess, head, head_cut):
    """Heights, branch excess and above-cutoff excess for every prime.

    ``head[p]`` is the largest sum of (alpha - 1) over the leading run of
    edges whose child primes exceed ``head_cut``.
    """
    if limit >= 2:
        H[2] = 0
        excess[2] = 0
        head[2] = 0
    for p in range(3, limit + 1):
        if spf[p] != p:
            continue
        m = p - 1
        h = 0
        e = 0
        he = 0
        while m > 1:
            q = spf[m]
            a = 0
            while m % q == 0:
                m //= q
                a += 1
            if H[q] + 1 > h:
                h = H[q] + 1
            if a - 1 + excess[q] > e:
                e = a - 1 + excess[q]
            if q > head_cut and a - 1 + head[q] > he:
                he = a - 1 + head[q]
        H[p] = h
        excess[p] = e
        head[p] = he
