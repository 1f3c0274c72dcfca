"""Correlation and confidence-interval helpers used in the reports."""

from __future__ import annotations

import numpy as np
from scipy import special, stats as sps


class UndefinedCorrelationError(ValueError):
    pass


def pearson_corr(x, y) -> tuple[float, float]:
    """Pearson r with a two-sided p-value from t = r*sqrt((n-2)/(1-r^2))
    against the t distribution with n-2 degrees of freedom."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x)
    if n != len(y):
        raise ValueError("x and y must have the same length")
    if n < 3:
        raise UndefinedCorrelationError("need at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    den = np.sqrt((dx * dx).sum() * (dy * dy).sum())
    if den == 0.0:
        raise UndefinedCorrelationError("correlation undefined for constant input")
    r = float(np.clip((dx * dy).sum() / den, -1.0, 1.0))
    if abs(r) == 1.0:
        return r, 0.0
    t = abs(r) * np.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(special.stdtr(n - 2, -t))
    return r, p


def ci_width(values, confidence: float = 0.95) -> float:
    """Width of the two-sided t confidence interval for the mean:
    2 * t_{(1+c)/2, n-1} * s / sqrt(n), sample stddev s (n-1 divisor)."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    if n < 2:
        raise ValueError("need at least 2 values")
    s = float(values.std(ddof=1))
    if s == 0.0:
        return 0.0
    quantile = float(sps.t.ppf((1.0 + confidence) / 2.0, n - 1))
    return 2.0 * quantile * s / np.sqrt(n)
