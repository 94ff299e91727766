"""Carleman-type reconstruction with the translated kernel v = K_z(x - x0, t - t0).

u(x0, t0) = -lim I(tau) as tau grows.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Optional, Union

import numpy as np

from ..errors import KernelSingularityError
from ..geometry import validate_config
from ..kernel import DEFAULT_CONFIG, kernel_samples
from ..managers import DaskManager
from ..phased_complex import PhasedComplex
from ..space_time import ComplexFrequency, ProbeDirection, SpaceTimePoint, make_z
from ..variables import KernelConfig, MeasurementSet, ReconstructionEstimate, ScenarioGeometry
from .functional import TestFunctionValues, boundary_functional

logger = logging.getLogger(__name__)

SINGULAR_DISTANCE = 1e-6


def _concat(parts: list[PhasedComplex]) -> PhasedComplex:
    return PhasedComplex(
        np.concatenate([p.log_mag for p in parts]),
        np.concatenate([p.arg for p in parts]),
    )


class CarlemanTestFunction:
    def __init__(
        self,
        z: ComplexFrequency,
        target: SpaceTimePoint,
        cfg: KernelConfig = DEFAULT_CONFIG,
        manager: Optional[DaskManager] = None,
    ):
        self.z = z
        self.target = target
        self.cfg = cfg
        self.manager = manager or DaskManager()

    def _chunk(self, x: np.ndarray, t: np.ndarray, normal: Optional[np.ndarray]):
        samples = kernel_samples(self.z, x, t, self.cfg, gradient=normal is not None)
        v = samples.phased()
        dv = None
        if normal is not None:
            dv = PhasedComplex.from_scaled(samples.log_scale, np.sum(samples.gradient * normal, axis=1))
        with np.errstate(divide="ignore"):
            log_error = np.log(samples.error) + samples.exponent
        return v, dv, log_error

    def evaluate(self, x: np.ndarray, t: np.ndarray, normal: Optional[np.ndarray] = None) -> TestFunctionValues:
        dx = x - self.target.x[None, :]
        dt = t - self.target.t
        distance = np.sqrt(np.sum(dx**2, axis=1) + dt**2)
        if np.any(distance < SINGULAR_DISTANCE):
            raise KernelSingularityError(SINGULAR_DISTANCE)

        if normal is None:
            results = self.manager.map_chunks(lambda a, b: self._chunk(a, b, None), dx, dt)
        else:
            results = self.manager.map_chunks(self._chunk, dx, dt, normal)
        v = _concat([r[0] for r in results])
        dv = None if normal is None else _concat([r[1] for r in results])
        log_error = np.concatenate([r[2] for r in results])
        return TestFunctionValues(v=v, dv=dv, log_error=log_error)


def carleman_estimate(
    data: MeasurementSet,
    geom: ScenarioGeometry,
    probe: ProbeDirection,
    tau: float,
    target: Optional[Union[SpaceTimePoint, np.ndarray]] = None,
    cfg: KernelConfig = DEFAULT_CONFIG,
    min_margin: float = 0.0,
    manager: Optional[DaskManager] = None,
) -> ReconstructionEstimate:
    """-I(tau) with the Carleman kernel centred at the target (geom.target unless given)"""
    if target is None:
        target = geom.target
    elif not isinstance(target, SpaceTimePoint):
        target = SpaceTimePoint.from_array(target)
    validate_config(replace(geom, target=target), probe, min_margin)
    z = make_z(probe, tau)
    v_eval = CarlemanTestFunction(z, target, cfg, manager)
    value, log_error = boundary_functional(data, v_eval)
    estimate = -value.to_complex()
    logger.info("Carleman estimate at tau=%g: %s", tau, estimate)
    with np.errstate(over="ignore"):
        quad_error = float(np.exp(log_error))
    return ReconstructionEstimate(
        tau=float(tau),
        estimate=complex(estimate),
        phase_scale=1.0,
        quad_error=quad_error,
        method="carleman",
    )
