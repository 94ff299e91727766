"""Half-space hypotheses of the reconstruction formulas.

Each margin is the distance (along omega(c)) by which a set of unknown data
stays below the target level. Suprema of the linear function over boxes are
taken at cell vertices, so the margins are exact.
"""

from __future__ import annotations

import logging
from itertools import product
from typing import Optional

import numpy as np

from ..errors import ConfigurationRejectedError
from ..space_time import ProbeDirection, omega_c
from ..variables import Box, ConfigMargins, ScenarioGeometry

logger = logging.getLogger(__name__)

FINAL_TIME = "final_time"
INITIAL_DATA = "initial_data"
LATERAL_BOUNDARY = "lateral_boundary"

SET_NAMES = {
    FINAL_TIME: "Omega x {T}",
    INITIAL_DATA: "(Omega minus U) x {0}",
    LATERAL_BOUNDARY: "(boundary of Omega x (0,T)) minus Gamma",
}

# order of the hypotheses: unknown final data, unknown initial data, unmeasured lateral boundary
HYPOTHESIS_NUMBERS = {FINAL_TIME: 1, INITIAL_DATA: 2, LATERAL_BOUNDARY: 3}


def _cells(breaks: list[np.ndarray]):
    """Consecutive intervals along each axis, combined into boxes"""
    intervals = [list(zip(b[:-1], b[1:])) for b in breaks]
    return product(*intervals)


def _breaks(lo: float, hi: float, extra: list[float]) -> np.ndarray:
    points = [lo, hi] + [min(max(v, lo), hi) for v in extra]
    return np.unique(points)


def _inside(cell, box_lo, box_hi) -> bool:
    return all(lo <= a and b <= hi for (a, b), lo, hi in zip(cell, box_lo, box_hi))


def _sup_over_cells(cells, level_func) -> float:
    sup = -np.inf
    for cell in cells:
        for vertex in product(*cell):
            sup = max(sup, level_func(np.array(vertex)))
    return sup


def final_time_margin(geom: ScenarioGeometry, w: np.ndarray, level: float) -> float:
    vertices = geom.domain.vertices()
    return level - float(np.max(vertices @ w[:-1] + geom.T * w[-1]))


def initial_data_margin(geom: ScenarioGeometry, w: np.ndarray, level: float) -> float:
    dom, U = geom.domain, geom.U
    breaks = [
        _breaks(dom.lower[k], dom.upper[k], [U.lower[k], U.upper[k]]) for k in range(dom.n)
    ]
    outside = [cell for cell in _cells(breaks) if not _inside(cell, U.lower, U.upper)]
    sup = _sup_over_cells(outside, lambda x: x @ w[:-1])
    return level - sup


def lateral_boundary_margin(geom: ScenarioGeometry, w: np.ndarray, level: float) -> float:
    dom = geom.domain
    sup = -np.inf
    for face in dom.faces():
        pieces = [p for p in geom.gamma if p.face == face]
        extent = dom.face_extent(face)
        t_breaks = _breaks(0.0, geom.T, [v for p in pieces for v in p.window])
        if extent is None:
            breaks = [t_breaks]
            covers = [((p.window[0],), (p.window[1],)) for p in pieces]
        else:
            spans = [p.tangential_range(dom) for p in pieces]
            s_breaks = _breaks(extent[0], extent[1], [v for s in spans for v in s])
            breaks = [s_breaks, t_breaks]
            covers = [((s[0], p.window[0]), (s[1], p.window[1])) for s, p in zip(spans, pieces)]

        uncovered = [
            cell for cell in _cells(breaks) if not any(_inside(cell, lo, hi) for lo, hi in covers)
        ]

        def face_level(vertex: np.ndarray, face=face) -> float:
            s = None if dom.n == 1 else vertex[:1]
            x = dom.face_points(face, s, 1)[0]
            return float(x @ w[:-1] + vertex[-1] * w[-1])

        sup = max(sup, _sup_over_cells(uncovered, face_level))
    return level - sup


def compute_margins(geom: ScenarioGeometry, probe: ProbeDirection) -> ConfigMargins:
    """Margins of the three hypotheses; +inf where the set is empty"""
    if probe.n != geom.n:
        raise ValueError(f"Probe of dimension {probe.n} for a {geom.n}D scenario")
    w = omega_c(probe)
    level = float(geom.target.as_array() @ w)
    return ConfigMargins(
        m_T=final_time_margin(geom, w, level),
        m_U=initial_data_margin(geom, w, level),
        m_Gamma=lateral_boundary_margin(geom, w, level),
    )


def validate_config(geom: ScenarioGeometry, probe: ProbeDirection, min_margin: float = 0.0) -> ConfigMargins:
    """Margins, raising ConfigurationRejectedError for the first one not above min_margin"""
    margins = compute_margins(geom, probe)
    for condition, margin in zip([FINAL_TIME, INITIAL_DATA, LATERAL_BOUNDARY], margins.as_tuple()):
        if not margin > min_margin:
            raise ConfigurationRejectedError(condition, SET_NAMES[condition], margin, HYPOTHESIS_NUMBERS[condition])
    logger.info("Configuration accepted with margins %s", margins)
    return margins


def default_delta(
    geom: ScenarioGeometry, probe: ProbeDirection, fraction: float = 0.4, margins: Optional[ConfigMargins] = None
) -> float:
    """fraction x min(margins, distance of the target to the boundary of the cylinder)"""
    margins = margins or validate_config(geom, probe)
    target = geom.target
    distance = min(geom.domain.distance_to_boundary(target.x), target.t, geom.T - target.t)
    return fraction * min(margins.minimum, distance)
