"""Empirical counterparts of the counting lemmas behind the bounds on L(n).

Each counting function here is exact (enumeration over n <= x) and comes
with the closed-form bound it is compared against.  Constants that the
bounds leave unspecified are reported by the ``calibrate_*`` helpers rather
than fixed in advance.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .arith import prime_mask, primes_upto
from .errors import ResourceError, TableKindError
from .rangesieve import H_SENTINEL, Kind, RangeTable

# --------------------------------------------------------------------------
# Dickman rho
# --------------------------------------------------------------------------

RHO_STEP = 2.0**-10
RHO_UMAX = 20.0

# 4-point weights for the integral over one step, all nodes inside a unit
# interval: first step, interior steps, last step.
_W_FIRST = np.array([9.0, 19.0, -5.0, 1.0]) / 24.0
_W_MID = np.array([-1.0, 13.0, 13.0, -1.0]) / 24.0
_W_LAST = np.array([1.0, -5.0, 19.0, 9.0]) / 24.0


@dataclass(frozen=True, eq=False)
class RhoTable:
    """Dickman rho on the knots ``u_i = i * step`` for ``0 <= u_i <= u_max``.

    Built from rho(u) = rho(k) - int_k^u rho(t - 1) / t dt, one unit interval
    at a time, with a fourth-order step rule whose stencil never crosses an
    integer (rho is only piecewise smooth there).  Lookups between knots use
    cubic interpolation on four knots of the same unit interval.
    """

    step: float
    u_max: float
    values: np.ndarray

    @property
    def per_unit(self) -> int:
        return int(round(1.0 / self.step))

    @classmethod
    def build(cls, step: float = RHO_STEP, u_max: float = RHO_UMAX) -> "RhoTable":
        m = int(round(1.0 / step))
        if m < 4 or abs(m * step - 1.0) > 1e-12:
            raise ValueError("step must be 1/m for an integer m >= 4")
        units = int(math.ceil(u_max))
        rho = np.ones(units * m + 1)
        j = np.arange(m)
        for k in range(1, units):
            t = (k + np.arange(m + 1) / m)
            g = rho[(k - 1) * m : k * m + 1] / t
            inc = np.empty(m)
            inc[1:-1] = _W_MID @ np.stack([g[j[1:-1] - 1], g[j[1:-1]], g[j[1:-1] + 1], g[j[1:-1] + 2]])
            inc[0] = _W_FIRST @ g[0:4]
            inc[-1] = _W_LAST @ g[m - 3 : m + 1]
            rho[k * m + 1 : (k + 1) * m + 1] = rho[k * m] - np.cumsum(inc) * step
        return cls(step, float(units), rho)

    def __call__(self, u):
        u_arr = np.asarray(u, dtype=float)
        if np.any(u_arr < 0) or np.any(u_arr > self.u_max):
            raise ValueError(f"u outside tabulated range [0, {self.u_max}]")
        m = self.per_unit
        out = np.ones_like(u_arr)
        big = u_arr > 1.0
        if np.any(big):
            ub = u_arr[big]
            k = np.minimum(np.floor(ub), self.u_max - 1).astype(np.int64)
            # points sitting exactly on an integer belong to the interval below
            k = np.where((ub == k) & (k > 1), k - 1, k)
            s = (ub - k) * m
            j0 = np.clip(np.floor(s).astype(np.int64) - 1, 0, m - 3)
            x = s - j0
            base = k * m + j0
            v = self.values
            y0, y1, y2, y3 = v[base], v[base + 1], v[base + 2], v[base + 3]
            out[big] = (
                -y0 * (x - 1) * (x - 2) * (x - 3) / 6
                + y1 * x * (x - 2) * (x - 3) / 2
                - y2 * x * (x - 1) * (x - 3) / 2
                + y3 * x * (x - 1) * (x - 2) / 6
            )
        return float(out) if np.ndim(u) == 0 else out


_rho_table: RhoTable | None = None


def rho_table() -> RhoTable:
    global _rho_table
    if _rho_table is None:
        _rho_table = RhoTable.build()
    return _rho_table


def dickman_rho(u):
    """Dickman's function on ``0 <= u <= 20`` (scalar or array)."""
    return rho_table()(u)


# --------------------------------------------------------------------------
# Smooth numbers and Brun-Titchmarsh sums
# --------------------------------------------------------------------------

MAX_ENUM = 10**8


def _guard(x: int, limit: int = MAX_ENUM) -> None:
    if x > limit:
        raise ResourceError(f"exhaustive count up to {x} exceeds the limit {limit}")


def smooth_count(x: int, z: int) -> int:
    """Psi(x, z): number of n <= x with every prime factor <= z (n = 1 included)."""
    if x < 1 or z < 1:
        raise ValueError("smooth_count expects x, z >= 1")
    if z >= x:
        return x
    if z < 2:
        return 1
    _guard(x)
    rough = np.zeros(x + 1, dtype=bool)
    for p in primes_upto(x):
        if p > z:
            rough[p::p] = True
    return x - int(np.count_nonzero(rough[1:]))


class RecipSum(NamedTuple):
    total: float
    count: int


def bt_recip_sum(x: int, m: int) -> RecipSum:
    """Sum of 1/p over primes p <= x with p = 1 (mod m)."""
    if x < 2 or m < 2:
        raise ValueError("bt_recip_sum expects x >= 2 and m >= 2")
    _guard(x)
    ps = primes_upto(x)
    ps = ps[ps % m == 1]
    return RecipSum(math.fsum(1.0 / ps), int(ps.size))


def loglog(x: float) -> float:
    return math.log(math.log(x))


def calibrate_bt(xs: Iterable[int], ms: Iterable[int]) -> float:
    """Smallest C with bt_recip_sum(x, m) <= C * loglog(x) / m on the grid."""
    ms = list(ms)
    best = 0.0
    for x in xs:
        for m in ms:
            best = max(best, bt_recip_sum(x, m).total * m / loglog(x))
    return best


# --------------------------------------------------------------------------
# Prime chains
# --------------------------------------------------------------------------

CHAIN_MAX_X = 10**7


def _chain_levels(x: int, q: int, alpha: int, k: int):
    """Weights ``w[p]`` = number of chains q^alpha | q_{k-1} - 1, ..., q_1 | p - 1."""
    if k < 1 or alpha < 1:
        raise ValueError("chain parameters need k >= 1 and alpha >= 1")
    _guard(x, CHAIN_MAX_X)
    isprime = prime_mask(x)
    w = np.zeros(x + 1, dtype=np.float64)
    qa = q**alpha
    if qa < x:
        idx = np.arange(qa + 1, x + 1, qa)
        w[idx[isprime[idx]]] = 1.0
    for _ in range(k - 1):
        nxt = np.zeros_like(w)
        for s in np.flatnonzero(w):
            idx = np.arange(s + 1, x + 1, s)
            idx = idx[isprime[idx]]
            nxt[idx] += w[s]
        w = nxt
    return w


def chain_count(x: int, q: int, alpha: int, k: int) -> int:
    """Number of distinct n <= x divisible by the end p of some chain.

    The chain is q^alpha | q_{k-1} - 1, q_{k-1} | q_{k-2} - 1, ..., q_1 | p - 1
    with all q_i prime; distinctness of the q_i is not required.
    """
    w = _chain_levels(x, q, alpha, k)
    hit = np.zeros(x + 1, dtype=bool)
    for p in np.flatnonzero(w):
        hit[p::p] = True
    return int(np.count_nonzero(hit))


def chain_sum(x: int, q: int, alpha: int, k: int) -> int:
    """The same count taken with multiplicity: sum over chains of floor(x/p)."""
    w = _chain_levels(x, q, alpha, k)
    ps = np.flatnonzero(w)
    return int(round(float(np.sum(w[ps] * (x // ps)))))


def chain_bound(x: float, q: int, alpha: int, k: int, c: float) -> float:
    """x (c y)^k / q^alpha with y = log log x."""
    if x < 3:
        raise ValueError("chain_bound needs x >= 3")
    return x * (c * loglog(x)) ** k / float(q) ** alpha


def chain_constant(x: int, q: int, alpha: int, k: int, count: int | None = None) -> float:
    """Smallest c for which chain_count <= chain_bound at this tuple."""
    if count is None:
        count = chain_count(x, q, alpha, k)
    return (count * float(q) ** alpha / x) ** (1.0 / k) / loglog(x)


@dataclass
class ChainCalibration:
    c: float
    worst: tuple[int, int, int, int]
    rows: list[tuple[int, int, int, int, int, float]] = field(repr=False)


def calibrate_chains(
    xs: Sequence[int] = (10**4, 10**5),
    qs: Sequence[int] = (2, 3, 5),
    alphas: Sequence[int] = (1, 2, 3, 4, 5),
    ks: Sequence[int] = (1, 2, 3),
) -> ChainCalibration:
    rows = []
    for x in xs:
        for q in qs:
            for a in alphas:
                for k in ks:
                    cnt = chain_count(x, q, a, k)
                    rows.append((x, q, a, k, cnt, chain_constant(x, q, a, k, cnt)))
    worst = max(rows, key=lambda r: r[5])
    return ChainCalibration(worst[5], worst[:4], rows)


# --------------------------------------------------------------------------
# Exact prime powers
# --------------------------------------------------------------------------


def power_exact_divisor_count(x: int, Y: int, a: int) -> int:
    """Number of n <= x with p^a || n for some prime p > Y."""
    if a < 2:
        raise ValueError("power_exact_divisor_count expects a >= 2")
    if x < 1:
        raise ValueError("x must be >= 1")
    _guard(x)
    hit = np.zeros(x + 1, dtype=bool)
    pmax = int(round(x ** (1.0 / a))) + 1
    for p in primes_upto(pmax):
        p = int(p)
        pa = p**a
        if p <= Y or pa > x:
            continue
        idx = np.arange(pa, x + 1, pa)
        hit[idx[(idx // pa) % p != 0]] = True
    return int(np.count_nonzero(hit))


def calibrate_powers(
    xs: Sequence[int], Ys: Sequence[int] = (5, 10, 100), As: Sequence[int] = (2, 3, 4)
) -> tuple[float, tuple[int, int, int]]:
    """Smallest C with count <= C x / Y^(a-1) on the grid, and where it is attained."""
    best, where = 0.0, (0, 0, 0)
    for x in xs:
        for Y in Ys:
            for a in As:
                ratio = power_exact_divisor_count(x, Y, a) * float(Y) ** (a - 1) / x
                if ratio > best:
                    best, where = ratio, (x, Y, a)
    return best, where


# --------------------------------------------------------------------------
# The large-exponent bound
# --------------------------------------------------------------------------


def prop_bound_log(x: float, gamma: float, b: float, psi_value: float, c: float) -> float:
    """Natural log of x (c y)^((log x)^gamma + 1) / 2^(b (log x)^gamma psi - 2)."""
    if x < 3:
        raise ValueError("prop_bound needs x >= 3")
    lx = math.log(x)
    y = math.log(lx)
    lg = lx**gamma
    return lx + (lg + 1.0) * math.log(c * y) - (b * lg * psi_value - 2.0) * math.log(2.0)


def prop_bound_eval(x: float, gamma: float, b: float, psi_value: float, c: float) -> float:
    lv = prop_bound_log(x, gamma, b, psi_value, c)
    return math.exp(lv) if lv < 709.0 else math.inf


def prop_bound_ratio(x: float, gamma: float, b: float, psi_value: float, c: float) -> float:
    """The bound divided by x."""
    return math.exp(prop_bound_log(x, gamma, b, psi_value, c) - math.log(x))


def psi_logloglog(x: float, scale: float = 3.0) -> float:
    return scale * math.log(math.log(math.log(x)))


def prop_sweep(
    xs: Iterable[float],
    gamma: float = 0.95,
    b: float = 1.0,
    c: float = 2.0,
    psi: Callable[[float], float] = psi_logloglog,
) -> list[tuple[float, float]]:
    return [(x, prop_bound_ratio(x, gamma, b, psi(x), c)) for x in xs]


# --------------------------------------------------------------------------
# Distribution report
# --------------------------------------------------------------------------

CSV_HEADER = (
    "x,count,mean_L,mean_L_over_y,p50,p90,p99,max_L,argmax,"
    "frac_below_c_y,frac_above_logx_gamma,mean_H_over_y,mean_L_minus_H"
)


@dataclass(frozen=True)
class DecadeRow:
    x: int
    count: int
    mean_L: float
    mean_L_over_y: float
    p50: int
    p90: int
    p99: int
    max_L: int
    argmax: int
    frac_below_c_y: float
    frac_above_logx_gamma: float
    mean_H_over_y: float
    mean_L_minus_H: float


@dataclass
class StatReport:
    limit: int
    c: float
    gamma: float
    rows: list[DecadeRow]
    excess_histogram: dict[int, int]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            fields = [
                str(r.x), str(r.count), _g(r.mean_L), _g(r.mean_L_over_y),
                str(r.p50), str(r.p90), str(r.p99), str(r.max_L), str(r.argmax),
                _g(r.frac_below_c_y), _g(r.frac_above_logx_gamma),
                _g(r.mean_H_over_y), _g(r.mean_L_minus_H),
            ]
            buf.write(",".join(fields) + "\n")
        return buf.getvalue()


def _g(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.6g}"


def decade_edges(limit: int, first: int = 1000) -> list[int]:
    edges = []
    x = first
    while x <= limit:
        edges.append(x)
        x *= 10
    if not edges or edges[-1] != limit:
        edges.append(limit)
    return edges


def _quantile(counts: np.ndarray, total: int, q: float) -> int:
    # inverted-CDF quantile straight from a histogram of small integers
    return int(np.searchsorted(np.cumsum(counts), q * total, side="left"))


def distribution_report(
    L_table: RangeTable, H_table: RangeTable, c: float = 1.0, gamma: float = 0.9503
) -> StatReport:
    """Per-decade statistics of L(n) and of H(p), L(p) - H(p) over primes.

    Row ``x`` covers (previous edge, x], the first row starts at 1.  y is
    log log x at the row's upper edge.
    """
    if L_table.kind is not Kind.L8 or H_table.kind is not Kind.H8:
        raise TableKindError("distribution_report needs an L8 and an H8 table")
    if L_table.limit != H_table.limit:
        raise TableKindError("L and H tables cover different ranges")
    N = L_table.limit
    Lv = L_table.values
    Hv = H_table.values
    rows = []
    lo = 1
    for x in decade_edges(N):
        seg = Lv[lo : x + 1]
        cnt = seg.size
        y = loglog(x) if x >= 3 else math.nan
        counts = np.bincount(seg, minlength=256)
        mean_L = float(np.dot(np.arange(256), counts)) / cnt
        imax = int(np.argmax(seg))
        below = c * y
        frac_below = float(counts[: _ceil_strict(below)].sum()) / cnt
        cap = math.log(x) ** gamma
        frac_above = float(counts[int(math.floor(cap)) + 1 :].sum()) / cnt
        hseg = Hv[lo : x + 1]
        isp = hseg != H_SENTINEL
        hp = hseg[isp].astype(np.int64)
        diff = seg[isp].astype(np.int64) - hp
        rows.append(
            DecadeRow(
                x=x,
                count=cnt,
                mean_L=mean_L,
                mean_L_over_y=mean_L / y,
                p50=_quantile(counts, cnt, 0.5),
                p90=_quantile(counts, cnt, 0.9),
                p99=_quantile(counts, cnt, 0.99),
                max_L=int(seg[imax]),
                argmax=lo + imax,
                frac_below_c_y=frac_below,
                frac_above_logx_gamma=frac_above,
                mean_H_over_y=float(hp.mean()) / y if hp.size else math.nan,
                mean_L_minus_H=float(diff.mean()) if hp.size else math.nan,
            )
        )
        lo = x + 1
    return StatReport(N, c, gamma, rows, excess_histogram(L_table, H_table))


def _ceil_strict(v: float) -> int:
    """Number of integer values L >= 0 with L < v."""
    if math.isnan(v) or v <= 0:
        return 0
    return int(math.ceil(v))


def excess_histogram(L_table: RangeTable, H_table: RangeTable) -> dict[int, int]:
    """Histogram of L(p) - H(p) over all primes in the tables."""
    isp = H_table.values != H_SENTINEL
    isp[0] = False
    diff = L_table.values[isp].astype(np.int64) - H_table.values[isp].astype(np.int64)
    values, counts = np.unique(diff, return_counts=True)
    return {int(v): int(n) for v, n in zip(values, counts)}


def small_L_set(L_table: RangeTable, bound: int) -> list[int]:
    """All n in the table with L(n) <= bound."""
    return [int(n) for n in np.flatnonzero(L_table.values[1:] <= bound) + 1]
