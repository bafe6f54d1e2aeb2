"""Closed-form frequency bounds, threshold solvers, and probability models.

Everything here is pure arithmetic on (n, i).  Binomials are exact integers;
the inequality solver compares cross-multiplied integers so the delicate
crossing is decided exactly.  Bracketed integer expressions are evaluated as
round-half-up (`bracket`), which reproduces the printed integer outcomes.

Decimal constants appearing in the analytic index formulas are recomputed
from their closed forms rather than hard-coded:

* cycle/ordinary coverage balance flips at eps = 1 - sqrt(2)/2,
  giving the index constant sqrt(1 - sqrt(2)/2) = 0.54120 ("0.5412"),
* the rare-coverage/frequent-coverage count crossing constant 3 - 2*sqrt(2)
  = 0.17157 ("0.1716"),
* the both-pairs-coverage overtake constant, the root of
  2 q^2 = (1 - q)^4 in (0, 1), i.e. ((2 + sqrt 2) - sqrt(2 + 4 sqrt 2)) / 2
  = 0.32356 ("0.3236").

Each result records whether the recomputed constant agrees with the printed
decimal within 1e-4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CONSTANT_TOL = 1e-4

# printed decimals these formulas are usually quoted with
PRINTED_THRESHOLD_CONSTANT = 0.5412
PRINTED_BALANCE_CONSTANT = 0.1716
PRINTED_OVERTAKE_CONSTANT = 0.3236

THRESHOLD_CONSTANT = math.sqrt(1.0 - math.sqrt(2.0) / 2.0)
BALANCE_CONSTANT = 3.0 - 2.0 * math.sqrt(2.0)
OVERTAKE_CONSTANT = ((2.0 + math.sqrt(2.0)) - math.sqrt(2.0 + 4.0 * math.sqrt(2.0))) / 2.0
EPS_HALF = 1.0 - math.sqrt(2.0) / 2.0  # coverage fraction where r = 1/2


def comb0(m: int, k: int) -> int:
    """Binomial coefficient extended by zero outside 0 <= k <= m."""
    if k < 0 or m < 0 or k > m:
        return 0
    return math.comb(m, k)


def bracket(x: float) -> int:
    """Round half up: the '[x]' of the printed integer formulas."""
    return math.floor(x + 0.5)


def p0(n: int) -> int:
    """Subset size where an edge's total frequency peaks."""
    if n % 2 == 0:
        return n // 2 + 2
    return (n + 1) // 2 + 1


@dataclass(frozen=True)
class AnalyticParams:
    """All closed-form bounds for a frequency subgraph of size i inside K_n.

    The coverage counts J, K, L partition the C(n-2, i-2) subsets containing
    a fixed ordinary edge by how many of its adjacent cycle-edge pairs they
    include; the partition is meaningful for n >= 6, where the two pairs
    involve four distinct vertices.
    """

    n: int
    i: int
    f_lb: float            # cycle-edge lower bound, C(i,2)/2 (worst average case)
    f_lb_worst: float      # worst-case variant, 7/18 * C(i,2)
    f_oavg: float          # expected cycle-edge frequency floor, (i^2-4i+7)/2
    ord_ub: int            # ordinary-edge frequency ceiling, 2(i-3)
    ord_avg_ub: float      # best-average ordinary ceiling, (i+2)/2
    pair_lb: float         # two adjacent cycle edges, 4(i-1)^2/5
    pair_lb_mid: float     # variant 3(i-1)^2/4
    pair_lb_worst: float   # variant 7(i-1)^2/10
    p0: int
    epsilon: float         # (i-2)(i-3)/((n-2)(n-3))
    r: float               # 2*eps - eps^2 (so 1-r = (1-eps)^2)
    J: int
    K: int
    L: int
    n_subgraphs: int       # C(n-2, i-2)


def bounds(n: int, i: int) -> AnalyticParams:
    if i < 4:
        raise ValueError(f"subgraph size must be >= 4, got {i}")
    if i > n:
        raise ValueError(f"subgraph size {i} exceeds n={n}")
    pairs = math.comb(i, 2)
    eps = (i - 2) * (i - 3) / ((n - 2) * (n - 3))
    nsub = comb0(n - 2, i - 2)
    J = comb0(n - 6, i - 2)
    K = 2 * comb0(n - 4, i - 4) - comb0(n - 6, i - 6)
    return AnalyticParams(
        n=n,
        i=i,
        f_lb=pairs / 2,
        f_lb_worst=7 * pairs / 18,
        f_oavg=(i * i - 4 * i + 7) / 2,
        ord_ub=2 * (i - 3),
        ord_avg_ub=(i + 2) / 2,
        pair_lb=4 * (i - 1) ** 2 / 5,
        pair_lb_mid=3 * (i - 1) ** 2 / 4,
        pair_lb_worst=7 * (i - 1) ** 2 / 10,
        p0=p0(n),
        epsilon=eps,
        r=2 * eps - eps * eps,
        J=J,
        K=K,
        L=nsub - J - K,
        n_subgraphs=nsub,
    )


# ---------------------------------------------------------------------------
# Decline-threshold solver
# ---------------------------------------------------------------------------

def solve_id(n: int, residual_corrected: bool = False) -> int:
    """Smallest i >= 4 where the ordinary-edge probability must start falling.

    Decides, in exact integer arithmetic, the smallest i with

        (A - (i-2)(i-3)) / (A - (i-1)(i-2)) >= sqrt(1 + 2/(i(i+1)))

    for A = (n-2)(n-3).  With ``residual_corrected`` the right side becomes
    sqrt(1 + 1.5/(i(i+1))), accounting for the negative residual dropped in
    the derivation; that variant crosses earlier.
    """
    if n < 8:
        raise ValueError(f"threshold model needs n >= 8, got {n}")
    A = (n - 2) * (n - 3)
    i = 4
    while i <= n:
        den = A - (i - 1) * (i - 2)
        if den <= 0:
            break
        num = A - (i - 2) * (i - 3)
        t = i * (i + 1)
        if residual_corrected:
            ok = num * num * 2 * t >= den * den * (2 * t + 3)
        else:
            ok = num * num * t >= den * den * (t + 2)
        if ok:
            return i
        i += 1
    raise ValueError(f"no i <= {n} satisfies the decline inequality")


@dataclass(frozen=True)
class SparsifyThreshold:
    """Analytic index past which the extreme-model ordinary average sinks below C(i,2)/2."""

    n: int
    index: int              # bracket(constant * n + offset)
    index_printed: int      # same with the printed 4-decimal constant
    constant: float
    printed_constant: float
    constant_agrees: bool
    two_i_d: int            # 2 * solve_id(n), reported side by side


def sparsify_threshold(n: int) -> SparsifyThreshold:
    if n < 8:
        raise ValueError(f"threshold model needs n >= 8, got {n}")
    c = THRESHOLD_CONSTANT
    offset = 2.5 - 2.5 * c + 4.0  # the printed "+5.1470": [c(n-2.5)+2.5], shifted by 4
    return SparsifyThreshold(
        n=n,
        index=bracket(c * n + offset),
        index_printed=bracket(PRINTED_THRESHOLD_CONSTANT * n + 5.1470),
        constant=c,
        printed_constant=PRINTED_THRESHOLD_CONSTANT,
        constant_agrees=abs(c - PRINTED_THRESHOLD_CONSTANT) <= CONSTANT_TOL,
        two_i_d=2 * solve_id(n),
    )


# ---------------------------------------------------------------------------
# Extreme-model probability curve and its decrement
# ---------------------------------------------------------------------------

def coverage_ratio_exact(n: int, i: int) -> float:
    """Exact share of an edge's containing subsets that include both adjacent
    cycle-edge pairs: K / C(n-2, i-2) written as the four-factor product."""
    a = (i - 2) * (i - 3) / ((n - 2) * (n - 3))
    b = (i - 2) * (i - 3) * (i - 4) * (i - 5) / (
        (n - 2) * (n - 3) * (n - 4) * (n - 5)
    )
    return 2.0 * a - b


@dataclass
class PdModel:
    """Extreme-model ordinary-edge probability curve and forward differences.

    ``p[k]`` is the model value at subset size ``i_values[k]``; ``pd[k]`` is
    p(i_k) - p(i_k + 1), defined up to i = n-1 (the last entry is NaN).
    """

    n: int
    i_values: np.ndarray
    p: np.ndarray
    pd: np.ndarray

    @property
    def peak_i(self) -> int:
        """Subset size with the largest model probability."""
        return int(self.i_values[int(np.argmax(self.p))])

    @property
    def pd_turn_i(self) -> int:
        """Subset size where the decrement itself peaks."""
        valid = ~np.isnan(self.pd)
        return int(self.i_values[valid][int(np.nanargmax(self.pd[valid]))])

    def p_at(self, i: int) -> float:
        return float(self.p[i - 4])

    def pd_at(self, i: int) -> float:
        return float(self.pd[i - 4])

    @property
    def first_p_at_most_half(self) -> int:
        idx = np.nonzero(self.p <= 0.5)[0]
        return int(self.i_values[idx[0]]) if len(idx) else -1

    @property
    def first_cum_drop_over_half(self) -> int:
        """Smallest i where the total decline from the peak exceeds 1/2."""
        peak = self.p.max()
        idx = np.nonzero(peak - self.p > 0.5)[0]
        return int(self.i_values[idx[0]]) if len(idx) else -1

    def mean_pd(self, lo: int, hi: int) -> float:
        """Mean of pd over subset sizes lo..hi inclusive."""
        a, b = lo - 4, hi - 4
        seg = self.pd[a : b + 1]
        if np.isnan(seg).any():
            raise ValueError(f"pd undefined somewhere in [{lo},{hi}]")
        return float(seg.mean())


def pd_model(n: int) -> PdModel:
    """Evaluate the extreme-model probability curve for i in [4, n].

    The model gives an ordinary edge the maximum label C(i,2)-1 in every
    containing subset except the exact share that also contains both adjacent
    cycle-edge pairs, where its average label is (i+2)/2:

        p(i) = 1 - (1 - (i+4)/(i(i-1))) * r_exact(n, i) - 2/(i(i-1))
    """
    if n < 8:
        raise ValueError(f"probability model needs n >= 8, got {n}")
    i_values = np.arange(4, n + 1, dtype=np.int64)
    iv = i_values.astype(np.float64)
    r = np.array([coverage_ratio_exact(n, int(i)) for i in i_values])
    p = 1.0 - (1.0 - (iv + 4.0) / (iv * (iv - 1.0))) * r - 2.0 / (iv * (iv - 1.0))
    pd = np.full(len(i_values), np.nan)
    pd[:-1] = p[:-1] - p[1:]
    return PdModel(n=n, i_values=i_values, p=p, pd=pd)


@dataclass(frozen=True)
class Decrement:
    """One consecutive probability step classified against the decline law."""

    i: int
    pd: float           # p_i - p_{i+1}
    err: float          # pd - 2 p_i / (i(i-1)); positive marks an ordinary edge
    ratio: float        # p_{i+1} / p_i (NaN when p_i = 0)
    harmonic_drop: bool  # p_{i+1} < i/(i+1) * p_i, compared exactly


def decrement_law(p_i: float, p_next: float, i: int) -> Decrement:
    if not (0.0 <= p_i <= 1.0 and 0.0 <= p_next <= 1.0):
        raise ValueError(f"probabilities must lie in [0,1]: {p_i}, {p_next}")
    if i < 4:
        raise ValueError(f"subset size must be >= 4, got {i}")
    pd = p_i - p_next
    err = pd - 2.0 * p_i / (i * (i - 1))
    ratio = p_next / p_i if p_i > 0 else math.nan
    return Decrement(
        i=i,
        pd=pd,
        err=err,
        ratio=ratio,
        harmonic_drop=p_next * (i + 1) < p_i * i,
    )


# ---------------------------------------------------------------------------
# Coverage-count curves
# ---------------------------------------------------------------------------

@dataclass
class Coverage:
    """Percent curves of the J/K/L coverage partition over i, with crossings."""

    n: int
    i_values: np.ndarray
    j_pct: np.ndarray
    k_pct: np.ndarray
    l_pct: np.ndarray
    jl_pct: np.ndarray
    first_k_over_j: int          # exact big-integer crossing
    first_l_over_j: int          # exact crossing where the J/L balance flips
    first_r_at_least_half: int   # smallest i with both-pairs share >= 1/2
    approx_k_over_j: int         # bracket(overtake_constant * n + 4)
    approx_l_over_j: int         # bracket(balance_constant * (n-2.5) + 2.5)
    constants_agree: bool = field(default=True)


def _jkl_scaled(n: int, i: int) -> tuple[int, int, int, int]:
    """The J/K/L shares of C(n-2, i-2), scaled to exact integers.

    Cancelling the common binomial factors leaves ratios with denominator
    D = (n-2)(n-3)(n-4)(n-5):  J/N = (n-i)(n-i-1)(n-i-2)(n-i-3)/D and
    K/N = [2(i-2)(i-3)(n-4)(n-5) - (i-2)(i-3)(i-4)(i-5)]/D, so the curves
    and crossings never touch the huge binomials themselves.
    """
    D = (n - 2) * (n - 3) * (n - 4) * (n - 5)
    j = (n - i) * (n - i - 1) * (n - i - 2) * (n - i - 3)
    k = 2 * (i - 2) * (i - 3) * (n - 4) * (n - 5) - (i - 2) * (i - 3) * (i - 4) * (i - 5)
    return j, k, D - j - k, D


def coverage_fractions(n: int) -> Coverage:
    if n < 8:
        raise ValueError(f"coverage curves need n >= 8, got {n}")
    i_values = np.arange(4, n + 1, dtype=np.int64)
    j_pct = np.empty(len(i_values))
    k_pct = np.empty(len(i_values))
    l_pct = np.empty(len(i_values))
    first_kj = -1
    first_lj = -1
    first_rhalf = -1
    for idx, i in enumerate(i_values):
        j, k, l, D = _jkl_scaled(n, int(i))
        j_pct[idx] = 100.0 * j / D
        k_pct[idx] = 100.0 * k / D
        l_pct[idx] = 100.0 * l / D
        if first_kj < 0 and k > j:
            first_kj = int(i)
        if first_lj < 0 and l > j:
            first_lj = int(i)
        if first_rhalf < 0 and 2 * k >= D:
            first_rhalf = int(i)
    agree = (
        abs(OVERTAKE_CONSTANT - PRINTED_OVERTAKE_CONSTANT) <= CONSTANT_TOL
        and abs(BALANCE_CONSTANT - PRINTED_BALANCE_CONSTANT) <= CONSTANT_TOL
        and abs(THRESHOLD_CONSTANT - PRINTED_THRESHOLD_CONSTANT) <= CONSTANT_TOL
    )
    return Coverage(
        n=n,
        i_values=i_values,
        j_pct=j_pct,
        k_pct=k_pct,
        l_pct=l_pct,
        jl_pct=j_pct + l_pct,
        first_k_over_j=first_kj,
        first_l_over_j=first_lj,
        first_r_at_least_half=first_rhalf,
        approx_k_over_j=bracket(OVERTAKE_CONSTANT * n + 4.0),
        approx_l_over_j=bracket(BALANCE_CONSTANT * (n - 2.5) + 2.5),
        constants_agree=agree,
    )


# ---------------------------------------------------------------------------
# Quadratic probability model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbabilityModel:
    """p(i) = (a i^2 + b i + c) / C(i,2); raw and clamped evaluations."""

    a: float
    b: float
    c: float
    n: int

    def evaluate(self, i: int) -> float:
        return (self.a * i * i + self.b * i + self.c) / math.comb(i, 2)

    def evaluate_clamped(self, i: int) -> float:
        return min(1.0, max(0.0, self.evaluate(i)))


def fit_probability_model(points: list[tuple[int, float]], n: int) -> ProbabilityModel:
    """Fit (a, b, c) through three (i, p) observations."""
    if len(points) != 3:
        raise ValueError(f"need exactly 3 points, got {len(points)}")
    A = np.array([[i * i, i, 1.0] for i, _ in points])
    y = np.array([p * math.comb(i, 2) for i, p in points])
    a, b, c = np.linalg.solve(A, y)
    return ProbabilityModel(a=float(a), b=float(b), c=float(c), n=n)
