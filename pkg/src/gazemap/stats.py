"""The statistical battery: rank tests, Student's t, Bartlett, effect sizes,
seeded bootstrap confidence intervals, Bonferroni correction, and TLX scoring.

Exact modes of the rank tests enumerate the full null distribution and are
switched on below configurable sample-size cutoffs. Bootstrap randomness is
counter-based: resample i of seed s draws from its own generator, so results
are reproducible no matter how the resamples would be scheduled.
"""

from __future__ import annotations

import itertools
import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from gazemap.distributions import (
    chi2_sf_1df,
    normal_two_sided_p,
    student_t_two_sided_p,
)
from gazemap.errors import (
    AllZeroDifferences,
    BadM,
    DegenerateVariance,
    EmptySample,
    RatingOutOfRange,
    WeightSumInvalid,
)
from gazemap.model import StatResult

MWU_EXACT_CUTOFF = 14      # combined sample size
WILCOXON_EXACT_CUTOFF = 12  # nonzero pairs
DEFAULT_RESAMPLES = 10_000

TLX_FACTORS = ("mental", "physical", "temporal", "performance", "effort", "frustration")

CLIFFS_DELTA_THRESHOLDS = (0.147, 0.33, 0.474)
CLIFFS_DELTA_MAGNITUDES = ("negligible", "small", "medium", "large")


@dataclass(frozen=True, slots=True)
class TLXRecord:
    """One participant's TLX answers for one task: six ratings on the
    20-point scale and six pairwise-comparison weights."""

    participant: str
    task: str
    ratings: tuple[float, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ratings) != 6 or len(self.weights) != 6:
            raise ValueError("a TLX record has exactly six ratings and six weights")


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def _sample_var(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties replaced by the mean rank of the tied run."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def _tie_sizes(values: Sequence[float]) -> list[int]:
    sizes = []
    for _value, run in itertools.groupby(sorted(values)):
        sizes.append(sum(1 for _ in run))
    return [t for t in sizes if t > 1]


def mann_whitney_u(
    x: Sequence[float],
    y: Sequence[float],
    exact_cutoff: int = MWU_EXACT_CUTOFF,
) -> StatResult:
    """Two-sided Mann-Whitney U test; U = min(U1, U2).

    Exact p by enumerating all rank labelings when the combined size is at
    most exact_cutoff and there are no ties; otherwise the normal
    approximation with tie and continuity corrections.
    """
    if not x:
        raise EmptySample("x")
    if not y:
        raise EmptySample("y")
    n1, n2 = len(x), len(y)
    combined = list(x) + list(y)
    ranks = _midranks(combined)
    r1 = math.fsum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1
    u = min(u1, u2)
    ties = _tie_sizes(combined)

    if not ties and n1 + n2 <= exact_cutoff:
        # U1 under the null is the rank-subset sum statistic; enumerate it
        count_le = 0
        total = 0
        for subset in itertools.combinations(range(1, n1 + n2 + 1), n1):
            uu1 = sum(subset) - n1 * (n1 + 1) / 2.0
            if uu1 <= u + 1e-12:
                count_le += 1
            total += 1
        p = min(1.0, 2.0 * count_le / total)
        notes = "exact enumeration"
    else:
        n = n1 + n2
        mu = n1 * n2 / 2.0
        tie_term = math.fsum(t**3 - t for t in ties) / (n * (n - 1)) if n > 1 else 0.0
        var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
        if var <= 0:
            p = 1.0
            notes = "normal approximation; zero variance after tie correction"
        else:
            z = max(0.0, abs(u - mu) - 0.5) / math.sqrt(var)
            p = min(1.0, normal_two_sided_p(z))
            notes = "normal approximation with tie and continuity corrections"
        if ties:
            notes += "; ties present"

    return StatResult(
        method="mann_whitney_u", statistic=u, p_value=p, n1=n1, n2=n2, notes=notes
    )


def wilcoxon_signed_rank(
    x: Sequence[float],
    y: Sequence[float],
    exact_cutoff: int = WILCOXON_EXACT_CUTOFF,
) -> StatResult:
    """Two-sided Wilcoxon signed-rank test on paired samples; W = min(W+, W-).

    Zero differences are dropped. Exact p enumerates all 2^m sign patterns
    over the (mid)ranked magnitudes when m <= exact_cutoff; otherwise the
    normal approximation with tie and continuity corrections.
    """
    if len(x) != len(y):
        raise ValueError("paired samples must have equal length")
    if not x:
        raise EmptySample("paired sample")
    diffs = [xi - yi for xi, yi in zip(x, y) if xi != yi]
    if not diffs:
        raise AllZeroDifferences()
    m = len(diffs)
    ranks = _midranks([abs(d) for d in diffs])
    w_plus = math.fsum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = math.fsum(r for r, d in zip(ranks, diffs) if d < 0)
    w = min(w_plus, w_minus)

    if m <= exact_cutoff:
        count_le = 0
        for signs in itertools.product((False, True), repeat=m):
            wp = math.fsum(r for r, s in zip(ranks, signs) if s)
            if wp <= w + 1e-12:
                count_le += 1
        p = min(1.0, 2.0 * count_le / 2**m)
        notes = "exact sign-pattern enumeration"
    else:
        mu = m * (m + 1) / 4.0
        tie_term = math.fsum(t**3 - t for t in _tie_sizes([abs(d) for d in diffs]))
        var = m * (m + 1) * (2 * m + 1) / 24.0 - tie_term / 48.0
        if var <= 0:
            p = 1.0
            notes = "normal approximation; zero variance after tie correction"
        else:
            z = max(0.0, abs(w - mu) - 0.5) / math.sqrt(var)
            p = min(1.0, normal_two_sided_p(z))
            notes = "normal approximation with tie and continuity corrections"

    return StatResult(
        method="wilcoxon_signed_rank",
        statistic=w,
        p_value=p,
        n1=len(x),
        n2=len(y),
        notes=notes + f"; nonzero pairs={m}",
    )


def students_t_summary(
    m1: float, s1: float, n1: int, m2: float, s2: float, n2: int
) -> StatResult:
    """Pooled-variance two-sample t test from summary statistics."""
    if n1 < 2 or n2 < 2:
        raise EmptySample("need at least two observations per group")
    if s1 < 0 or s2 < 0:
        raise ValueError("standard deviations must be >= 0")
    df = n1 + n2 - 2
    pooled_var = ((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / df
    if pooled_var == 0:
        raise DegenerateVariance("both groups have zero variance")
    t = (m1 - m2) / math.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    return StatResult(
        method="students_t",
        statistic=t,
        p_value=student_t_two_sided_p(t, df),
        n1=n1,
        n2=n2,
        notes=f"pooled variance, df={df}",
    )


def students_t(x: Sequence[float], y: Sequence[float]) -> StatResult:
    """Pooled-variance two-sample t test on raw data."""
    if len(x) < 2 or len(y) < 2:
        raise EmptySample("need at least two observations per group")
    return students_t_summary(
        _mean(x), math.sqrt(_sample_var(x)), len(x),
        _mean(y), math.sqrt(_sample_var(y)), len(y),
    )


def bartlett(x: Sequence[float], y: Sequence[float]) -> StatResult:
    """Bartlett's test for equal variances of two groups (chi-square, 1 df)."""
    if len(x) < 2 or len(y) < 2:
        raise EmptySample("need at least two observations per group")
    n1, n2 = len(x), len(y)
    v1, v2 = _sample_var(x), _sample_var(y)
    if v1 == 0 or v2 == 0:
        raise DegenerateVariance("a group has zero variance")
    df_total = n1 + n2 - 2
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / df_total
    numer = (
        df_total * math.log(pooled)
        - (n1 - 1) * math.log(v1)
        - (n2 - 1) * math.log(v2)
    )
    denom = 1.0 + (1.0 / (n1 - 1) + 1.0 / (n2 - 1) - 1.0 / df_total) / 3.0
    stat = max(0.0, numer / denom)
    return StatResult(
        method="bartlett",
        statistic=stat,
        p_value=chi2_sf_1df(stat),
        n1=n1,
        n2=n2,
        notes="k=2 groups, chi-square with 1 df",
    )


def cohen_d_summary(
    m1: float, s1: float, n1: int, m2: float, s2: float, n2: int
) -> float:
    """Cohen's d with the pooled standard deviation."""
    if n1 < 2 or n2 < 2:
        raise EmptySample("need at least two observations per group")
    df = n1 + n2 - 2
    pooled_var = ((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / df
    if pooled_var == 0:
        raise DegenerateVariance("both groups have zero variance")
    return (m1 - m2) / math.sqrt(pooled_var)


def cohen_d(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) < 2 or len(y) < 2:
        raise EmptySample("need at least two observations per group")
    return cohen_d_summary(
        _mean(x), math.sqrt(_sample_var(x)), len(x),
        _mean(y), math.sqrt(_sample_var(y)), len(y),
    )


def cliffs_delta_magnitude(delta: float) -> str:
    # thresholds are strict lower bounds: |delta| must exceed 0.147 for "small"
    return CLIFFS_DELTA_MAGNITUDES[bisect_left(CLIFFS_DELTA_THRESHOLDS, abs(delta))]


def _delta_value(x: Sequence[float], y_sorted: Sequence[float]) -> float:
    n1, n2 = len(x), len(y_sorted)
    greater = 0
    less = 0
    for xi in x:
        less += n2 - bisect_right(y_sorted, xi)   # y values above xi
        greater += bisect_left(y_sorted, xi)      # y values below xi
    return (greater - less) / (n1 * n2)


def _counter_rng(seed: int, counter: int) -> random.Random:
    # unique integer per (seed, counter): reproducible regardless of
    # resample scheduling
    return random.Random((seed << 32) ^ counter)


def _percentile_ci(sorted_values: Sequence[float], level: float) -> tuple[float, float]:
    alpha = (1.0 - level) / 2.0

    def quantile(q: float) -> float:
        h = (len(sorted_values) - 1) * q
        lo = math.floor(h)
        hi = math.ceil(h)
        if lo == hi:
            return sorted_values[lo]
        return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])

    return quantile(alpha), quantile(1.0 - alpha)


def cliffs_delta(
    x: Sequence[float],
    y: Sequence[float],
    level: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
) -> StatResult:
    """Cliff's delta with a seeded percentile-bootstrap confidence interval.

    delta = (#{x_i > y_j} - #{x_i < y_j}) / (n1*n2), in [-1, 1]. Pass
    resamples=0 to skip the interval. No p-value: this is an effect size,
    not a test.
    """
    if not x:
        raise EmptySample("x")
    if not y:
        raise EmptySample("y")
    n1, n2 = len(x), len(y)
    delta = _delta_value(x, sorted(y))
    ci_low = ci_high = None
    notes = f"magnitude={cliffs_delta_magnitude(delta)}"
    if resamples > 0:
        boots = []
        for i in range(resamples):
            rng = _counter_rng(seed, i)
            bx = [x[rng.randrange(n1)] for _ in range(n1)]
            by = sorted(y[rng.randrange(n2)] for _ in range(n2))
            boots.append(_delta_value(bx, by))
        boots.sort()
        ci_low, ci_high = _percentile_ci(boots, level)
        notes += f"; percentile bootstrap, resamples={resamples}, seed={seed}, level={level}"
    return StatResult(
        method="cliffs_delta",
        statistic=delta,
        p_value=None,
        n1=n1,
        n2=n2,
        effect_size=delta,
        ci_low=ci_low,
        ci_high=ci_high,
        notes=notes,
    )


def bootstrap_ci_mean_diff(
    x: Sequence[float],
    y: Sequence[float],
    level: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Percentile-bootstrap CI for mean(x) - mean(y); groups are resampled
    independently. Returns (low, high, observed mean difference)."""
    if not x:
        raise EmptySample("x")
    if not y:
        raise EmptySample("y")
    if not (0.0 < level < 1.0):
        raise ValueError(f"level must be in (0, 1), got {level}")
    n1, n2 = len(x), len(y)
    mean_diff = _mean(x) - _mean(y)
    boots = []
    for i in range(resamples):
        rng = _counter_rng(seed, i)
        bx = [x[rng.randrange(n1)] for _ in range(n1)]
        by = [y[rng.randrange(n2)] for _ in range(n2)]
        boots.append(_mean(bx) - _mean(by))
    boots.sort()
    low, high = _percentile_ci(boots, level)
    return low, high, mean_diff


def bonferroni(p_values: Sequence[float], m: int | None = None) -> list[float]:
    """Bonferroni-adjusted p-values: min(1, p * m)."""
    if m is None:
        m = len(p_values)
    if m < 1:
        raise BadM(m)
    for p in p_values:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"p-value must be in [0, 1], got {p}")
    return [min(1.0, p * m) for p in p_values]


def bonferroni_alpha(alpha: float, m: int) -> float:
    """Per-comparison significance threshold alpha / m."""
    if m < 1:
        raise BadM(m)
    return alpha / m


def nasa_tlx(r: TLXRecord) -> float:
    """Weighted TLX workload score: sum of rating*weight over the six
    factors, divided by 15. The weights must sum to 15 (one pick per
    pairwise comparison); the result lies on the same 20-point scale."""
    for value in r.ratings:
        if not (0.0 <= value <= 20.0):
            raise RatingOutOfRange(value)
    if any(w < 0 for w in r.weights):
        raise WeightSumInvalid(sum(r.weights))
    total = sum(r.weights)
    if total != 15:
        raise WeightSumInvalid(total)
    return math.fsum(rating * weight for rating, weight in zip(r.ratings, r.weights)) / 15.0
