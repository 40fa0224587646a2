"""Sweep harness and log-log rate fitting.

fit_rate regresses log(value / correction(N)) on log N by ordinary least
squares; the correction factors √(log N) and (log N)^6 remove the slowly
varying parts of the conjectured laws √(log N)/N and (log N)^6/N², leaving
exponents near -1 and -2 respectively.  Sweeps are embarrassingly parallel
over the N grid and the results are ordered by N regardless of completion
order, so the output is deterministic.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .coupling import BiasTransform, coupling_wasserstein_bound, inverse_moment_gap
from .errors import DomainError
from .radial import DEFAULT_TOL, solve_ground_state
from .stein import BoundReport, TiltedGaussianTarget, wasserstein_bound
from .wasser import w1_empirical_vs_cdf


class Correction(str, Enum):
    """Multiplicative factor divided out of the values before the log-log fit."""

    NONE = "none"
    SQRT_LOG = "sqrt_log"
    LOG_POW6 = "log_pow6"

    def factor(self, n: int) -> float:
        if self is Correction.NONE:
            return 1.0
        if self is Correction.SQRT_LOG:
            return math.sqrt(math.log(n))
        return math.log(n) ** 6


@dataclass(frozen=True)
class RateFit:
    """OLS fit of log(value/correction) against log N."""

    exponent: float
    intercept: float
    r_squared: float
    n_grid: tuple[int, ...]
    values: tuple[float, ...]
    correction: Correction

    def to_json_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "n_grid": list(self.n_grid),
            "values": list(self.values),
            "correction": self.correction.value,
        }


def fit_rate(pairs: Sequence[tuple[int, float]], correction: Correction = Correction.NONE) -> RateFit:
    """Fit value ≈ C · correction(N) · N^exponent over the given (N, value) pairs."""
    pts = sorted((int(n), float(v)) for n, v in pairs)
    ns = [n for n, _ in pts]
    vals = [v for _, v in pts]
    if len(pts) < 3:
        raise DomainError("rate fitting needs at least 3 points")
    if len(set(ns)) != len(ns):
        raise DomainError("N grid must be strictly increasing")
    if any(v <= 0.0 for v in vals):
        raise DomainError("rate fitting needs positive values")
    x = np.log(np.array(ns, dtype=float))
    y = np.log(np.array(vals) / np.array([correction.factor(n) for n in ns]))
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(
        exponent=float(coef[0]),
        intercept=float(coef[1]),
        r_squared=r2,
        n_grid=tuple(ns),
        values=tuple(vals),
        correction=correction,
    )


def evaluate_bound_report(
    k: int,
    n: int,
    tol: float = DEFAULT_TOL,
    exact: bool = False,
    with_coupling: bool = False,
) -> tuple[BoundReport, Optional[float], Optional[float]]:
    """Solve, bound, and optionally measure one (k, N) instance.

    Returns (report, coupling_bound, inverse_moment_l1); the last two are
    None unless with_coupling is set (coupling needs 1 <= k <= 8).
    """
    sol = solve_ground_state(k, n, tol)
    target = TiltedGaussianTarget(k)
    report = wasserstein_bound(sol, target)
    if exact:
        report = report.with_exact(w1_empirical_vs_cdf(sol.points, target))
    cb = iml = None
    if with_coupling:
        bt = BiasTransform(sol)
        cb = coupling_wasserstein_bound(bt)
        iml = inverse_moment_gap(bt, min(1, sol.k)).exact if sol.k >= 1 else 0.0
    return report, cb, iml


_METRICS = ("w1", "bound", "xm", "coupling")


def _sweep_value(args) -> tuple[int, float]:
    k, n, metric, tol = args
    sol = solve_ground_state(k, n, tol)
    if metric == "xm":
        return n, sol.median_point
    if metric == "bound":
        return n, wasserstein_bound(sol, TiltedGaussianTarget(k)).total_bound
    if metric == "coupling":
        return n, coupling_wasserstein_bound(BiasTransform(sol))
    return n, w1_empirical_vs_cdf(sol.points, TiltedGaussianTarget(k))


def sweep(
    k: int,
    n_grid: Sequence[int],
    metric: str = "w1",
    tol: float = DEFAULT_TOL,
    jobs: Optional[int] = None,
) -> list[tuple[int, float]]:
    """Evaluate one metric over an N grid, in parallel, ordered by N."""
    if metric not in _METRICS:
        raise DomainError(f"metric must be one of {_METRICS}, got {metric!r}")
    grid = sorted({int(n) for n in n_grid})
    if not grid:
        raise DomainError("empty N grid")
    tasks = [(k, n, metric, tol) for n in grid]
    if jobs is not None and jobs <= 1:
        results = [_sweep_value(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_value, tasks))
    return sorted(results)


def rate_study(
    k: int,
    n_grid: Sequence[int],
    correction: Correction,
    metric: str = "w1",
    tol: float = DEFAULT_TOL,
    jobs: Optional[int] = None,
) -> RateFit:
    """Sweep a metric over the grid and fit its log-log rate."""
    return fit_rate(sweep(k, n_grid, metric, tol, jobs), correction)
