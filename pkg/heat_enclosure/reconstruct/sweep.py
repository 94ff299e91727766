"""tau sweeps of a reconstruction formula."""

from __future__ import annotations

import logging
import time
from typing import Callable, Optional

import numpy as np

from ..errors import SweepError
from ..managers import DaskManager
from ..variables import ReconstructionEstimate, SweepReport, SweepRow

logger = logging.getLogger(__name__)

MIN_TAUS = 3

Estimator = Callable[[float], ReconstructionEstimate]


def _timed(estimator: Estimator, tau: float) -> tuple[ReconstructionEstimate, float]:
    start = time.perf_counter()
    result = estimator(tau)
    return result, 1e3 * (time.perf_counter() - start)


def _row(result: ReconstructionEstimate, wall_ms: float, reference: Optional[float]) -> SweepRow:
    if reference is None:
        rel_error = np.nan
    elif reference == 0:
        rel_error = abs(result.estimate)
    else:
        rel_error = abs(result.estimate - reference) / abs(reference)
    return SweepRow(
        tau=result.tau,
        estimate=result.estimate,
        reference=reference,
        rel_error=float(rel_error),
        quad_error=result.quad_error,
        wall_ms=wall_ms,
    )


def _growing(rows: list[SweepRow]) -> bool:
    """Did the step between the last two estimates grow?"""
    if len(rows) < 3:
        return False
    e = [row.estimate for row in rows[-3:]]
    return abs(e[2] - e[1]) > abs(e[1] - e[0])


def error_trend(rows: list[SweepRow]) -> tuple[float, bool]:
    """Least-squares slope of log(rel_error) against tau, and whether it is defined"""
    taus = np.array([row.tau for row in rows])
    errors = np.array([row.rel_error for row in rows])
    usable = np.isfinite(errors) & (errors > 0)
    if np.sum(usable) < 2:
        return np.nan, False
    slope, __ = np.polyfit(taus[usable], np.log(errors[usable]), 1)
    return float(slope), True


def tau_sweep(
    estimator: Estimator,
    taus: list[float],
    reference: Optional[float] = None,
    stop_on_growth: bool = True,
    manager: Optional[DaskManager] = None,
    silent: bool = True,
) -> SweepReport:
    """Evaluates the estimator at increasing taus.

    With stop_on_growth the taus run in order and the sweep stops as soon as
    |e_k - e_(k-1)| exceeds |e_(k-1) - e_(k-2)|; the row before is then
    reported as the best. Otherwise all taus run through the manager."""
    taus = [float(tau) for tau in np.atleast_1d(taus)]
    if len(taus) < MIN_TAUS or np.any(np.diff(taus) <= 0):
        raise SweepError(taus)

    rows: list[SweepRow] = []
    terminated_early = False
    if stop_on_growth:
        for tau in taus:
            rows.append(_row(*_timed(estimator, tau), reference))
            if not silent:
                print(f"tau={tau:g}: estimate={rows[-1].estimate:.10g}")
            if _growing(rows):
                terminated_early = True
                logger.warning(
                    "Estimates started to diverge at tau=%g, keeping tau=%g", tau, rows[-2].tau
                )
                break
        best_row = len(rows) - 2 if terminated_early else len(rows) - 1
    else:
        manager = manager or DaskManager()
        results = manager.compute([lambda tau=tau: _timed(estimator, tau) for tau in taus])
        rows = [_row(result, wall_ms, reference) for result, wall_ms in results]
        if reference is None:
            best_row = len(rows) - 1
        else:
            best_row = int(np.nanargmin([row.rel_error for row in rows]))

    slope, defined = error_trend(rows)
    report = SweepReport(
        rows=rows,
        trend_slope=slope,
        trend_defined=defined,
        best_row=best_row,
        terminated_early=terminated_early,
    )
    logger.info("Sweep over %d tau value(s), best tau=%g", len(rows), report.best.tau)
    return report
