"""Risk-adjusted objective: soft outage penalties instead of hard budgets.

The exploratory objective trades throughput against empirical outage
probabilities,

    J(q, r) = q*r - lambda_cov * F<_ccov(q*sqrt(n)/(2*delta))
                  - lambda_rel * F<_rach(r),

with F< the strict empirical CDFs of the cached sample arrays.  Because the
empirical CDFs are step functions, J is maximized by exhaustive evaluation
on a uniform grid over [0,1]^2 rather than by smooth optimization; each
penalty term needs one binary search per grid coordinate, so a full
401 x 401 sweep stays interactive even at K = 10^6.

Among grid points whose J lies within 1e-12 (absolute) of the maximum, the
reported maximizer is the lexicographically smallest (q, then r) — ties are
real here: whole axes of the grid can share J = 0 in the no-transmission
regime.  First-order-condition residuals for interior maximizers are
provided for smooth (closed-form) channel models, where densities exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._csvio import write_csv
from .quantiles import strict_cdf
from .risk_constrained import ProtocolParams
from .samples import SampleSet

__all__ = [
    "RiskWeights",
    "Strategy",
    "GridSpec",
    "GridMaximum",
    "objective",
    "grid_maximize",
    "lambda_sweep",
    "heatmap_sweep",
    "foc_residual",
    "write_lambda_sweep_csv",
    "write_heatmap_csv",
]

# J values this close to the grid maximum count as ties and fall through
# to the lexicographic rule.
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RiskWeights:
    """Penalty weights on covertness and reliability outage probabilities."""

    lambda_cov: float
    lambda_rel: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lambda_cov", float(self.lambda_cov))
        object.__setattr__(self, "lambda_rel", float(self.lambda_rel))
        if self.lambda_cov < 0 or self.lambda_rel < 0:
            raise ValueError(
                f"weights must be >= 0, got ({self.lambda_cov}, {self.lambda_rel})"
            )


@dataclass(frozen=True)
class Strategy:
    """A fixed transmission probability and code rate."""

    q: float
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "r", float(self.r))
        if not 0 <= self.q <= 1 or not 0 <= self.r <= 1:
            raise ValueError(f"strategy must lie in [0,1]^2, got ({self.q}, {self.r})")


@dataclass(frozen=True)
class GridSpec:
    """Uniform evaluation grid on [0,1] x [0,1]."""

    points_per_axis: int = 401

    def __post_init__(self) -> None:
        if self.points_per_axis < 2:
            raise ValueError(
                f"points_per_axis must be >= 2, got {self.points_per_axis}"
            )

    def axis(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.points_per_axis)


@dataclass(frozen=True)
class GridMaximum:
    """Grid maximizer, its objective value, and the sparse-regime flag.

    ``outside_sparse_regime`` marks maximizers whose q exceeds the
    transmission level a median channel draw would allow — the covertness
    surrogate is a small-q approximation, so such points are qualitative.
    """

    strategy: Strategy
    j_value: float
    outside_sparse_regime: bool


def objective(
    s: SampleSet, st: Strategy, w: RiskWeights, p: ProtocolParams
) -> float:
    """Risk-adjusted throughput J at a single strategy."""
    cov_outage = strict_cdf(s.ccov, st.q * np.sqrt(p.n) / (2.0 * p.delta))
    rel_outage = strict_cdf(s.rach, st.r)
    return st.q * st.r - w.lambda_cov * cov_outage - w.lambda_rel * rel_outage


def _sparse_q_bound(s: SampleSet, p: ProtocolParams) -> float:
    # Transmission probability the median c_cov draw would permit.
    return float(2.0 * p.delta * np.median(s.ccov) / np.sqrt(p.n))


def grid_maximize(
    s: SampleSet, w: RiskWeights, p: ProtocolParams, g: GridSpec = GridSpec()
) -> GridMaximum:
    """Exhaustive maximization of J over the uniform grid.

    Evaluation is vectorized: both penalty terms depend on one coordinate
    only, so they are precomputed per axis (one searchsorted pass each) and
    combined by outer sum.  Among near-ties (within TIE_TOLERANCE) the
    lexicographically smallest (q, r) wins; numpy's row-major argwhere
    ordering delivers exactly that ordering for free.
    """
    axis = g.axis()
    cov_pen = w.lambda_cov * strict_cdf(s.ccov, axis * np.sqrt(p.n) / (2.0 * p.delta))
    rel_pen = w.lambda_rel * strict_cdf(s.rach, axis)
    j = np.outer(axis, axis) - cov_pen[:, None] - rel_pen[None, :]
    j_best = float(j.max())
    ties = np.argwhere(j >= j_best - TIE_TOLERANCE)
    qi, ri = ties[0]
    strategy = Strategy(q=axis[qi], r=axis[ri])
    return GridMaximum(
        strategy=strategy,
        j_value=float(j[qi, ri]),
        outside_sparse_regime=strategy.q > _sparse_q_bound(s, p),
    )


def lambda_sweep(
    s: SampleSet,
    p: ProtocolParams,
    g: GridSpec,
    axis: str,
    values: Sequence[float],
    fixed_other: float,
) -> list[tuple[float, GridMaximum]]:
    """One grid_maximize per weight value, the other weight held fixed.

    ``axis`` selects which weight varies: "cov" or "rel".
    """
    if axis not in ("cov", "rel"):
        raise ValueError(f'axis must be "cov" or "rel", got {axis!r}')
    rows = []
    for value in values:
        if axis == "cov":
            w = RiskWeights(lambda_cov=value, lambda_rel=fixed_other)
        else:
            w = RiskWeights(lambda_cov=fixed_other, lambda_rel=value)
        rows.append((float(value), grid_maximize(s, w, p, g)))
    return rows


def heatmap_sweep(
    s: SampleSet,
    p: ProtocolParams,
    g: GridSpec,
    lambda_cov_values: Sequence[float],
    lambda_rel_values: Sequence[float],
) -> tuple[np.ndarray, np.ndarray]:
    """Cartesian weight sweep; returns (q_star, r_star) matrices indexed
    [i_cov, j_rel] in the given value order."""
    shape = (len(lambda_cov_values), len(lambda_rel_values))
    q_star = np.empty(shape)
    r_star = np.empty(shape)
    for i, lc in enumerate(lambda_cov_values):
        for j, lr in enumerate(lambda_rel_values):
            best = grid_maximize(s, RiskWeights(lc, lr), p, g)
            q_star[i, j] = best.strategy.q
            r_star[i, j] = best.strategy.r
    return q_star, r_star


def foc_residual(
    st: Strategy,
    w: RiskWeights,
    p: ProtocolParams,
    density_ccov: Callable[[float], float],
    density_rach: Callable[[float], float],
) -> tuple[float, float]:
    """Stationarity residuals of the smooth J at an interior strategy.

    For channel models with densities (closed forms, not empirical steps)
    an interior maximizer must satisfy dJ/dq = dJ/dr = 0:

        res_q = r - lambda_cov * (sqrt(n)/(2*delta)) * f_ccov(q*sqrt(n)/(2*delta))
        res_r = q - lambda_rel * f_rach(r)

    The caller supplies the density evaluators (analytic for the benchmark
    channel; finite differences of closed-form CDFs otherwise).
    """
    scale = np.sqrt(p.n) / (2.0 * p.delta)
    res_q = st.r - w.lambda_cov * scale * density_ccov(st.q * scale)
    res_r = st.q - w.lambda_rel * density_rach(st.r)
    return float(res_q), float(res_r)


def write_lambda_sweep_csv(
    rows, axis: str, fixed_other: float, path, *, seed=None, K=None, digest=None
) -> None:
    def cells():
        for value, best in rows:
            lc = value if axis == "cov" else fixed_other
            lr = fixed_other if axis == "cov" else value
            yield (
                lc,
                lr,
                best.strategy.q,
                best.strategy.r,
                best.j_value,
                best.outside_sparse_regime,
            )

    write_csv(
        path,
        ["lambda_cov", "lambda_rel", "q_star", "r_star", "j_value", "outside_sparse_regime"],
        cells(),
        seed=seed,
        K=K,
        digest=digest,
    )


def write_heatmap_csv(
    q_star, r_star, lambda_cov_values, lambda_rel_values, path,
    *, seed=None, K=None, digest=None,
) -> None:
    def cells():
        for i, lc in enumerate(lambda_cov_values):
            for j, lr in enumerate(lambda_rel_values):
                yield (lc, lr, q_star[i, j], r_star[i, j])

    write_csv(
        path,
        ["lambda_cov", "lambda_rel", "q_star", "r_star"],
        cells(),
        seed=seed,
        K=K,
        digest=digest,
    )
