"""Kolmogorov-Smirnov distances and reference cdfs for the harness."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

__all__ = [
    "std_normal_cdf",
    "gumbel_cdf",
    "ks_distance_sorted",
    "ks_statistic",
    "ks_two_sample",
    "ks_critical_one_sample",
    "ks_critical_two_sample",
]


def std_normal_cdf(x):
    """Standard normal cdf via the erf route (abs error ~1e-16)."""
    return ndtr(np.asarray(x, dtype=np.float64))


def gumbel_cdf(x):
    """Standard Gumbel cdf exp(-exp(-x))."""
    return np.exp(-np.exp(-np.asarray(x, dtype=np.float64)))


def ks_distance_sorted(sorted_values: np.ndarray, cdf_values: np.ndarray) -> float:
    """sup-distance between the ecdf of sorted data and given cdf values."""
    n = sorted_values.size
    if n == 0:
        raise ValueError("empty sample")
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = float(np.max(i / n - cdf_values))
    d_minus = float(np.max(cdf_values - (i - 1.0) / n))
    return max(d_plus, d_minus)


def ks_statistic(values, cdf) -> float:
    """One-sample KS distance of values against a vectorized cdf callable."""
    xs = np.sort(np.asarray(values, dtype=np.float64))
    return ks_distance_sorted(xs, np.asarray(cdf(xs), dtype=np.float64))


def ks_two_sample(x, y) -> float:
    """Two-sample KS distance between the ecdfs of x and y."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    pooled = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, pooled, side="right") / x.size
    cdf_y = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.max(np.abs(cdf_x - cdf_y)))


def _c_alpha(alpha: float) -> float:
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


def ks_critical_one_sample(n: int, alpha: float = 0.001) -> float:
    """Asymptotic one-sample critical value c(alpha)/sqrt(n); ~1.95/sqrt(n)
    at the 0.1% level."""
    return _c_alpha(alpha) / math.sqrt(n)


def ks_critical_two_sample(n: int, m: int, alpha: float = 0.001) -> float:
    """Asymptotic two-sample critical value c(alpha)*sqrt((n+m)/(n*m))."""
    return _c_alpha(alpha) * math.sqrt((n + m) / (n * m))
