"""Strict empirical CDFs and strict-outage quantiles on sorted sample arrays.

The outage events of interest are strict inequalities (realized value falls
strictly below a threshold), so the matching distribution function is
F<(x) = P[X < x] and the matching quantile is

    Q<(eps) = sup{ x : P[X < x] <= eps }.

On an empirical law of K sorted samples the supremum is the order statistic
x_(m+1) with m = floor(eps*K); this module implements exactly that, and the
test suite proves the equivalence by brute-force enumeration.  Both
operations cost O(log K) / O(1) on the pre-sorted arrays, which is what
makes dense budget sweeps against one cached sample set cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RiskBudgets", "strict_cdf", "strict_outage_quantile"]


@dataclass(frozen=True)
class RiskBudgets:
    """Per-frame outage budgets for covertness and reliability."""

    eps_cov: float
    eps_rel: float

    def __post_init__(self) -> None:
        for name in ("eps_cov", "eps_rel"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


def strict_cdf(samples: np.ndarray, x):
    """Fraction of samples strictly below x, elementwise over thresholds.

    Parameters
    ----------
    samples : ndarray
        Nonempty array sorted ascending (+inf entries allowed at the top).
    x : float or ndarray
        Threshold(s); -inf gives 0, anything above the maximum gives 1.
    """
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("samples must be nonempty")
    counts = np.searchsorted(samples, np.asarray(x), side="left")
    out = counts / samples.size
    return float(out) if np.ndim(x) == 0 else out


def strict_outage_quantile(samples: np.ndarray, eps: float):
    """sup{x : strict_cdf(samples, x) <= eps} of the empirical law.

    Equals the order statistic x_(m+1) with m = floor(eps*K), clamped to the
    maximum sample when m + 1 > K.  eps*K is evaluated in binary64; a value
    within one ulp of an integer is snapped to it before flooring, guarding
    against artifacts like 0.3*10 = 2.999... dropping a full order statistic.
    """
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("samples must be nonempty")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    k = samples.size
    t = eps * k
    nearest = np.rint(t)
    if abs(t - nearest) <= np.spacing(t):
        m = int(nearest)
    else:
        m = int(np.floor(t))
    return samples[min(m, k - 1)]
