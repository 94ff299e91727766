"""Sampling of caloric fields onto Gamma x (0,T) and U x {0}."""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, Optional, Union

import numpy as np

from ..geometry import box_rule, interval_rule
from ..space_time import ProbeDirection, make_z
from ..variables import BoundaryPiece, MeasurementSet, ScenarioGeometry
from .fields import CaloricField

logger = logging.getLogger(__name__)

EFOLDS_PER_PANEL = 8.0


def _rho_values(rho: Union[None, float, Callable], x: np.ndarray) -> np.ndarray:
    if rho is None:
        return np.zeros(len(x))
    if callable(rho):
        return np.asarray(rho(x), dtype=float) * np.ones(len(x))
    return np.full(len(x), float(rho))


def piece_rule(
    piece: BoundaryPiece,
    geom: ScenarioGeometry,
    time_panels: int,
    space_panels: int,
    order: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes (x, t) and weights of a tensor Gauss-Legendre rule on one piece"""
    t0, t1 = piece.window
    t, wt = interval_rule(t0, t1, int(np.ceil(time_panels * (t1 - t0) / geom.T)), order)
    span = piece.tangential_range(geom.domain)
    if span is None:
        x = geom.domain.face_points(piece.face, None, len(t))
        return x, t, wt

    extent = geom.domain.face_extent(piece.face)
    panels = int(np.ceil(space_panels * (span[1] - span[0]) / (extent[1] - extent[0])))
    s, ws = interval_rule(span[0], span[1], panels, order)
    S, Tm = np.meshgrid(s, t, indexing="ij")
    x = geom.domain.face_points(piece.face, S.ravel(), S.size)
    weights = np.outer(ws, wt).ravel()
    return x, Tm.ravel(), weights


def extract_traces(
    field: CaloricField,
    geom: ScenarioGeometry,
    rho: Union[None, float, Callable] = None,
    time_panels: int = 8,
    space_panels: int = 4,
    initial_panels: int = 8,
    order: int = 16,
) -> MeasurementSet:
    """Lateral Cauchy data on Gamma and initial data on U.

    Panel counts refer to the whole horizon (0, T), a whole face and the whole
    extent of U respectively. Grid fields supply their own one-sided flux."""
    if field.n != geom.n:
        raise ValueError(f"Field of dimension {field.n} for a {geom.n}D geometry")
    xs, ts, ws, normals, fluxes = [], [], [], [], []
    for piece in geom.gamma:
        x, t, w = piece_rule(piece, geom, time_panels, space_panels, order)
        normal = np.tile(geom.domain.face_normal(piece.face), (len(t), 1))
        if hasattr(field, "boundary_flux"):
            flux = field.boundary_flux(piece.face, t)
        else:
            flux = field.normal_derivative(x, t, normal)
        xs.append(x)
        ts.append(t)
        ws.append(w)
        normals.append(normal)
        fluxes.append(flux)

    gamma_x, gamma_t = np.vstack(xs), np.concatenate(ts)
    U = geom.clipped_U()
    initial_x, initial_weight = box_rule(U.lower, U.upper, initial_panels, order)
    data = MeasurementSet(
        gamma_x=gamma_x,
        gamma_t=gamma_t,
        normal=np.vstack(normals),
        u=field.value(gamma_x, gamma_t),
        flux=np.concatenate(fluxes),
        rho=_rho_values(rho, gamma_x),
        weight=np.concatenate(ws),
        initial_x=initial_x,
        initial_u=field.value(initial_x, np.zeros(len(initial_x))),
        initial_weight=initial_weight,
    )
    logger.debug("Extracted %d boundary and %d initial sample(s)", len(gamma_t), len(initial_x))
    return data


def suggest_panels(geom: ScenarioGeometry, probe: ProbeDirection, tau_max: float) -> dict[str, int]:
    """Panel counts resolving the test functions up to tau_max.

    Time panels follow the oscillation 2|a||b| of the kernel along the
    boundary; space panels follow |b| (oscillation) and |a| (growth)."""
    z = make_z(probe, tau_max)
    a, b = np.linalg.norm(z.a), z.b_norm
    extent = max(hi - lo for lo, hi in zip(geom.domain.lower, geom.domain.upper))
    time_rate = 2 * a * b + abs(z.zz.imag)
    space_rate = b / (2 * np.pi) + a / EFOLDS_PER_PANEL
    panels = {
        "time_panels": int(np.ceil(geom.T * time_rate / (2 * np.pi))) + 1,
        "space_panels": int(np.ceil(extent * space_rate)) + 1,
        "initial_panels": int(np.ceil(extent * space_rate)) + 1,
    }
    logger.info("Suggested trace panels for tau=%g: %s", tau_max, panels)
    return panels


def add_noise(
    data: MeasurementSet,
    amplitude: float,
    kind: str = "gaussian",
    seed: int = 0,
    relative: bool = False,
) -> MeasurementSet:
    """Perturbed copy of the samples (u and flux on Gamma, u on U).

    Noise is uniform on [-amplitude, amplitude] or Gaussian with standard
    deviation amplitude, scaled by |value| when relative."""
    if amplitude < 0:
        raise ValueError(f"Noise amplitude must be non-negative, got {amplitude}")
    rng = np.random.default_rng(seed)

    def perturb(values: np.ndarray) -> np.ndarray:
        if kind == "gaussian":
            noise = rng.normal(0.0, amplitude, len(values))
        elif kind == "uniform":
            noise = rng.uniform(-amplitude, amplitude, len(values))
        else:
            raise ValueError(f"Unknown noise kind '{kind}' (use 'gaussian' or 'uniform')")
        return values + (noise * np.abs(values) if relative else noise)

    return replace(data, u=perturb(data.u), flux=perturb(data.flux), initial_u=perturb(data.initial_u))
