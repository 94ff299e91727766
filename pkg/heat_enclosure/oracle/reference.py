"""Nested composite Gauss rules with Richardson extrapolation, used as brute-force references."""

from __future__ import annotations

import logging
from typing import Callable, Union

import numpy as np

from ..errors import QuadratureConvergenceError
from ..geometry import box_rule, simplex_panel_rule
from ..phased_complex import pairwise_sum
from ..variables import ConeRegion

logger = logging.getLogger(__name__)

Region = Union[tuple[float, float], list[tuple[float, float]], np.ndarray, ConeRegion]


def _level_value(integrand: Callable, region: Region, panels: int, order: int):
    if isinstance(region, ConeRegion) or (isinstance(region, np.ndarray) and region.ndim == 2):
        vertices = region.vertices if isinstance(region, ConeRegion) else region
        partial = [
            pairwise_sum(chunk.weights * integrand(chunk.points))
            for chunk in simplex_panel_rule(vertices, panels, order)
        ]
        return pairwise_sum(np.array(partial))

    bounds = np.atleast_2d(np.asarray(region, dtype=float))
    nodes, weights = box_rule(bounds[:, 0], bounds[:, 1], panels, order)
    if len(bounds) == 1:
        nodes = nodes[:, 0]
    return pairwise_sum(weights * integrand(nodes))


def reference_quadrature(
    integrand: Callable[[np.ndarray], np.ndarray],
    region: Region,
    target_tol: float = 1e-12,
    order: int = 8,
    max_levels: int = 12,
) -> tuple[complex, float]:
    """Integral of integrand over an interval (a, b), a box given as a list of
    intervals, or a simplex (ConeRegion or vertex rows).

    Level k uses 2^k panels per axis. The returned value is the Richardson
    extrapolation of the last two levels, the error estimate their difference."""
    previous, error = None, np.inf
    for level in range(max_levels + 1):
        current = _level_value(integrand, region, 2**level, order)
        if previous is not None:
            error = float(abs(current - previous))
            if error <= target_tol * max(1.0, abs(current)):
                value = current + (current - previous) / (2.0 ** (2 * order) - 1)
                logger.debug("Reference quadrature converged at level %d", level)
                return value, error
        previous = current
    raise QuadratureConvergenceError(error, target_tol, "Reference quadrature")
