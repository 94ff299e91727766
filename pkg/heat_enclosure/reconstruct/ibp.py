"""Integration by parts over the space-time cylinder.

For u caloric and any v, with h0 = du/dnu + rho u, h1 = dv/dnu + rho v and
f1 = v_t + Δv,

    int_{dOmega x (0,T)} (h1 u - h0 v) = int_Q f1 u + int_Omega u(.,0) v(.,0)
                                         - int_Omega u(.,T) v(.,T).

Point sources of v enter the volume term as weight * u(point).
"""

from __future__ import annotations

import logging
from typing import Callable, Optional, Union

import numpy as np

from ..caloric import CaloricField, piece_rule
from ..geometry import box_rule
from ..kernel import DEFAULT_CONFIG, kernel_samples
from ..phased_complex import pairwise_sum
from ..space_time import ComplexFrequency, SpaceTimePoint
from ..variables import BoundaryPiece, KernelConfig, ScenarioGeometry

logger = logging.getLogger(__name__)

SOURCE_STEP = 2e-4


class CarlemanKernelField(CaloricField):
    """v(x, t) = K_z(x - x0, t - t0): backward caloric with the source -delta at the target"""

    kind = "carleman_kernel"

    def __init__(self, z: ComplexFrequency, target: SpaceTimePoint, cfg: KernelConfig = DEFAULT_CONFIG):
        super().__init__(target.n)
        self.z = z
        self.target = target
        self.cfg = cfg
        self.point_sources = [(target, -1.0)]

    def _samples(self, x, t, gradient):
        return kernel_samples(self.z, x - self.target.x, t - self.target.t, self.cfg, gradient)

    def _value(self, x, t):
        return self._samples(x, t, False).phased().to_complex().real

    def _gradient(self, x, t):
        return self._samples(x, t, True).phased_gradient().to_complex().real

    def source(self, x, t) -> np.ndarray:
        return np.zeros(len(np.atleast_1d(t)))


def _source(v_field: CaloricField, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    if hasattr(v_field, "source"):
        return v_field.source(x, t)
    return v_field.residual(x, t, backward=True, h=SOURCE_STEP)


def _rho(rho: Union[float, Callable], x: np.ndarray) -> np.ndarray:
    if callable(rho):
        return np.asarray(rho(x), dtype=float) * np.ones(len(x))
    return np.full(len(x), float(rho))


def ibp_residual(
    u_field: CaloricField,
    v_field: CaloricField,
    geom: ScenarioGeometry,
    rho: Union[float, Callable] = 0.0,
    panels: int = 16,
    order: int = 16,
) -> float:
    """|LHS - RHS| of the integration-by-parts identity on the whole cylinder"""
    boundary = []
    for face in geom.domain.faces():
        piece = BoundaryPiece(face, (0.0, geom.T))
        x, t, w = piece_rule(piece, geom, panels, panels, order)
        normal = np.tile(geom.domain.face_normal(face), (len(t), 1))
        u, v = u_field.value(x, t), v_field.value(x, t)
        r = _rho(rho, x)
        h0 = u_field.normal_derivative(x, t, normal) + r * u
        h1 = v_field.normal_derivative(x, t, normal) + r * v
        boundary.append(w * (h1 * u - h0 * v))
    lhs = pairwise_sum(np.concatenate(boundary))

    lower, upper = geom.domain.lower, geom.domain.upper
    xq, wq = box_rule(lower + (0.0,), upper + (geom.T,), panels, order)
    x, t = xq[:, :-1], xq[:, -1]
    volume = pairwise_sum(wq * _source(v_field, x, t) * u_field.value(x, t))
    points = sum(
        weight * u_field.value(point.x[None, :], point.t)[0]
        for point, weight in getattr(v_field, "point_sources", [])
    )

    xs, ws = box_rule(lower, upper, panels, order)
    slices = []
    for time in (0.0, geom.T):
        tt = np.full(len(xs), time)
        slices.append(pairwise_sum(ws * u_field.value(xs, tt) * v_field.value(xs, tt)))
    rhs = volume + points + slices[0] - slices[1]

    residual = float(abs(lhs - rhs))
    logger.debug("Integration by parts: lhs=%.12g rhs=%.12g residual=%.3g", lhs, rhs, residual)
    return residual
