"""Risk-constrained throughput optimizer and its sweep harnesses.

Under strict-outage budgets the chance-constrained design problem separates:
the covertness constraint pins the largest admissible transmission
probability and the reliability constraint pins the largest admissible code
rate, independently of each other.  The optimum over the resulting feasible
rectangle is its upper-right corner,

    q_max = min{1, (2*delta/sqrt(n)) * Q<_ccov(eps_cov)},
    r_max = Q<_rach(eps_rel),
    t_star = q_max * r_max          (per-use covert throughput),

with Q< the strict-outage quantile of the cached sample arrays.  Because
both quantiles are nondecreasing in their budget, t_star is monotone in each
budget (the Pareto property the sweep tests rely on), and in the uncapped
regime n * t_star grows exactly like sqrt(n) — the square-root law.

r_max = 0 is a legal result meaning the reliability budget cannot be met at
any positive rate; the report then carries t_star = 0 rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._csvio import write_csv
from .physics import q_ceiling
from .quantiles import RiskBudgets, strict_outage_quantile
from .samples import SampleSet

__all__ = [
    "ProtocolParams",
    "OptimumReport",
    "optimize",
    "frontier_sweep",
    "surface_sweep",
    "n_scaling_sweep",
    "decade_gains",
    "DECADE_BUDGETS",
    "write_frontier_csv",
    "write_surface_csv",
    "write_scaling_csv",
    "write_decade_gains_csv",
]

# Symmetric budgets of the decade-gain table, smallest first.
DECADE_BUDGETS = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1)


@dataclass(frozen=True)
class ProtocolParams:
    """Frame length n and covertness threshold delta."""

    n: int
    delta: float

    def __post_init__(self) -> None:
        if self.n != int(self.n) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "delta", float(self.delta))
        if not 0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 0.5), got {self.delta}")


@dataclass(frozen=True)
class OptimumReport:
    """Optimizer output: the feasible rectangle's corner and its payload.

    ``q_capped`` records that the covertness bound exceeded 1 and was capped.
    ``below_resolution`` warns that a budget was finer than 1/K, where the
    strict-outage order statistic degenerates to the minimum sample and the
    estimate rests on sparse tail data.
    """

    q_max: float
    r_max: float
    t_star: float
    total_payload: float
    q_capped: bool
    below_resolution: bool = False


def optimize(s: SampleSet, p: ProtocolParams, b: RiskBudgets) -> OptimumReport:
    """Solve the rectangle problem on one sample set.

    Parameters
    ----------
    s : SampleSet
        Sorted marginal samples of c_cov and r_ach.
    p : ProtocolParams
        Frame length and covertness threshold.
    b : RiskBudgets
        Strict-outage budgets (eps_cov, eps_rel), each in (0, 1).

    Returns
    -------
    OptimumReport
        t_star is exactly q_max * r_max; total_payload is n * t_star.
    """
    c_quantile = strict_outage_quantile(s.ccov, b.eps_cov)
    q_unc = q_ceiling(c_quantile, p.delta, p.n)
    q_capped = bool(q_unc > 1.0)
    q_max = min(1.0, q_unc)
    r_max = float(strict_outage_quantile(s.rach, b.eps_rel))
    t_star = q_max * r_max
    return OptimumReport(
        q_max=q_max,
        r_max=r_max,
        t_star=t_star,
        total_payload=p.n * t_star,
        q_capped=q_capped,
        below_resolution=min(b.eps_cov, b.eps_rel) * s.K < 1.0,
    )


def frontier_sweep(
    s: SampleSet, p: ProtocolParams, eps_grid: Sequence[float]
) -> list[tuple[float, OptimumReport]]:
    """Optimize at symmetric budgets eps_cov = eps_rel = eps along a grid."""
    return [
        (float(eps), optimize(s, p, RiskBudgets(eps, eps))) for eps in eps_grid
    ]


def surface_sweep(
    s: SampleSet,
    p: ProtocolParams,
    eps_cov_grid: Sequence[float],
    eps_rel_grid: Sequence[float],
) -> list[list[OptimumReport]]:
    """Cartesian budget sweep; row index follows eps_cov, column eps_rel."""
    return [
        [optimize(s, p, RiskBudgets(ec, er)) for er in eps_rel_grid]
        for ec in eps_cov_grid
    ]


def n_scaling_sweep(
    s: SampleSet, delta: float, eps: float, n_grid: Sequence[int]
) -> list[tuple[int, float]]:
    """Total payload n * t_star versus frame length at a fixed symmetric budget.

    In the uncapped regime the payload equals sqrt(n) * (2*delta*Q<_ccov(eps))
    * r_max, so quadrupling n doubles the payload exactly (in floating point
    too: the n-dependence enters only through powers of two once n scales by
    4, leaving the significand untouched).
    """
    budgets = RiskBudgets(eps, eps)
    rows = []
    for n in n_grid:
        report = optimize(s, ProtocolParams(n=n, delta=delta), budgets)
        rows.append((int(n), report.total_payload))
    return rows


def decade_gains(
    frontier_rows: Iterable[tuple[float, OptimumReport]]
) -> list[tuple[float, float, float | None]]:
    """Multiplicative throughput gains between consecutive decade budgets.

    ``frontier_rows`` must contain all five decade budgets (1e-5 .. 1e-1).
    Each output row is (eps_from, eps_to, gain); a zero-throughput
    denominator yields gain None — the infeasible-gain marker — rather
    than an exception.
    """
    by_eps = {float(eps): rep for eps, rep in frontier_rows}
    missing = [eps for eps in DECADE_BUDGETS if eps not in by_eps]
    if missing:
        raise ValueError(f"frontier rows missing decade budgets {missing}")
    out: list[tuple[float, float, float | None]] = []
    for lo, hi in zip(DECADE_BUDGETS, DECADE_BUDGETS[1:]):
        t_lo = by_eps[lo].t_star
        t_hi = by_eps[hi].t_star
        gain = t_hi / t_lo if t_lo > 0 else None
        out.append((lo, hi, gain))
    return out


def _report_cells(report: OptimumReport):
    return (
        report.q_max,
        report.r_max,
        report.t_star,
        report.total_payload,
        report.q_capped,
    )


def write_frontier_csv(rows, path, *, seed=None, K=None, digest=None) -> None:
    write_csv(
        path,
        ["eps", "q_max", "r_max", "t_star", "n_t_star", "q_capped"],
        ((eps, *_report_cells(rep)) for eps, rep in rows),
        seed=seed,
        K=K,
        digest=digest,
    )


def write_surface_csv(
    matrix, eps_cov_grid, eps_rel_grid, path, *, seed=None, K=None, digest=None
) -> None:
    def rows():
        for i, ec in enumerate(eps_cov_grid):
            for j, er in enumerate(eps_rel_grid):
                yield (ec, er, *_report_cells(matrix[i][j]))

    write_csv(
        path,
        ["eps_cov", "eps_rel", "q_max", "r_max", "t_star", "n_t_star", "q_capped"],
        rows(),
        seed=seed,
        K=K,
        digest=digest,
    )


def write_scaling_csv(rows, path, *, seed=None, K=None, digest=None) -> None:
    write_csv(path, ["n", "n_t_star"], rows, seed=seed, K=K, digest=digest)


def write_decade_gains_csv(gains, path, *, seed=None, K=None, digest=None) -> None:
    write_csv(
        path,
        ["eps_from", "eps_to", "gain"],
        gains,
        seed=seed,
        K=K,
        digest=digest,
    )
