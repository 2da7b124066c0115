"""Heuristic quantities for the normal order of L(p).

All logarithms are natural.  ``coefficient(c, D)`` is the coefficient of
log log p contributed by a branch whose long prime chain reaches level
c log log p before ending in a prime power of q with D = log q.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .arith import check_u64, is_prime
from .carmichael import STANDARD, Variant
from .rangesieve import H_SENTINEL, sieve_L, sieve_pratt

E = math.e


def coefficient(c: float, D: float) -> float:
    """c + c log(e/c) / D for 0 < c <= e."""
    if not 0.0 < c <= E:
        raise ValueError(f"c={c} outside (0, e]")
    if D <= 0:
        raise ValueError("D must be positive")
    return c + c * math.log(E / c) / D


def denominator(q: int, variant: Variant = STANDARD) -> float:
    """D for a chain ending at the prime q.

    For q = 2 the standard rule lambda(2^a) = 2^(a-2) halves the number of
    useful exponent steps, which acts like D = log 4; the two-adic rule
    keeps D = log 2.
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2 and Variant.parse(variant) is STANDARD:
        return math.log(4.0)
    return math.log(q)


@dataclass(frozen=True)
class CoefficientMax:
    c_star: float
    f_star: float
    boundary: bool


def coefficient_max(D: float) -> CoefficientMax:
    """Maximise ``coefficient(c, D)`` over (0, e].

    The derivative is 1 - log(c)/D, so the only critical point is c = e^D;
    when that lies beyond e the supremum sits at the boundary c = e, where
    the coefficient equals e for every D.
    """
    if D <= 0:
        raise ValueError("D must be positive")
    if D < 1.0:
        c = math.exp(D)
        return CoefficientMax(c, coefficient(c, D), False)
    return CoefficientMax(E, E, True)


@dataclass(frozen=True)
class CoefficientCurve:
    D: float
    c: np.ndarray
    f: np.ndarray

    @classmethod
    def sample(cls, D: float, n: int = 1000) -> "CoefficientCurve":
        c = np.linspace(E / n, E, n)
        f = c + c * np.log(E / c) / D
        return cls(D, c, f)


def prob_no_hit(N: int, r: int, a: int) -> float:
    """(1 - 1/phi(r^a))^N: chance that none of N random primes is 1 mod r^a."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if a < 1 or not is_prime(r):
        raise ValueError("need a prime r and a >= 1")
    ra = check_u64(r**a, "r**a")
    phi = ra - ra // r
    if N == 0:
        return 1.0
    if phi == 1:
        return 0.0
    return math.exp(N * math.log1p(-1.0 / phi))


def expected_level_size(y_val: float, n: int) -> float:
    """y^n / n!, the heuristic number of Pratt tree nodes at depth n."""
    if y_val <= 0:
        raise ValueError("y must be positive")
    if not 0 <= n <= 170:
        raise OverflowError("level index must lie in [0, 170]")
    if n == 0:
        return 1.0
    lv = n * math.log(y_val) - math.lgamma(n + 1)
    if lv > 709.0:
        raise OverflowError("expected level size overflows a double")
    return math.exp(lv)


@dataclass
class ExcessReport:
    """L(p) - H(p) over primes p <= N, split into branch excess and a residual.

    ``residual = (L - H) - branch_excess``; ``head_excess`` only counts the
    surplus exponents on edges whose child prime exceeds ``cutoff``.
    """

    limit: int
    variant: Variant
    cutoff: int
    primes: np.ndarray
    L_minus_H: np.ndarray
    branch_excess: np.ndarray
    head_excess: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return self.L_minus_H - self.branch_excess

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.L_minus_H, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    @property
    def mean_excess(self) -> float:
        return float(self.L_minus_H.mean())

    def buckets(self) -> list[tuple[int, float, float, float, int]]:
        """Per dyadic bucket [2^k, 2^(k+1)): (k, mean L-H, mean excess, mean residual, count)."""
        # exact for p < 2**53
        ks = np.frexp(self.primes.astype(np.float64))[1].astype(np.int64) - 1
        out = []
        for k in np.unique(ks):
            sel = ks == k
            out.append(
                (
                    int(k),
                    float(self.L_minus_H[sel].mean()),
                    float(self.branch_excess[sel].mean()),
                    float(self.residual[sel].mean()),
                    int(sel.sum()),
                )
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("p_bucket,mean_L_minus_H,mean_branch_excess,residual_mean,count\n")
        for k, d, e, r, n in self.buckets():
            buf.write(f"{k},{d:.6g},{e:.6g},{r:.6g},{n}\n")
        return buf.getvalue()


def excess_report(
    N: int,
    variant: Variant = STANDARD,
    cutoff: int | None = None,
    *,
    workers: int | None = None,
    L_table=None,
) -> ExcessReport:
    """Tabulate L(p) - H(p) and its branch decomposition for primes p <= N.

    ``cutoff`` plays the role of the level threshold Y; by default
    exp((log log N)^(3/4)).
    """
    variant = Variant.parse(variant)
    if cutoff is None:
        cutoff = int(math.exp(math.log(math.log(max(N, 16))) ** 0.75))
    if L_table is None:
        L_table = sieve_L(N, variant, workers=workers)
    elif L_table.limit < N or L_table.variant != variant:
        raise ValueError("supplied L table does not cover N with this variant")
    pt = sieve_pratt(N, head_cut=cutoff)
    primes = np.flatnonzero(pt.heights != H_SENTINEL)
    primes = primes[primes >= 2]
    L = L_table.values[primes].astype(np.int64)
    H = pt.heights[primes].astype(np.int64)
    return ExcessReport(
        N,
        variant,
        cutoff,
        primes.astype(np.int64),
        L - H,
        pt.excess[primes].astype(np.int64),
        pt.head_excess[primes].astype(np.int64),
    )
