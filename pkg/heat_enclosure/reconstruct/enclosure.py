"""Enclosure-method reconstruction.

The test function is the convolution

    v(p) = int_D K_z(p - q) exp(x_q·z - t_q(z·z)) dq

over the cone D with its vertex at the target, so that

    u(x0, t0) = -(1/C) lim tau^mu exp(-x0·z + t0(z·z)) I(tau).
"""

from __future__ import annotations

import logging
from typing import Optional, Union

import numpy as np
from scipy.special import logsumexp

from ..errors import ConeProximityError, GeometryError, QuadratureConvergenceError
from ..geometry import analytic_constant, concatenate, enclosure_rule, validate_config
from ..kernel import DEFAULT_CONFIG, kernel_samples
from ..managers import DaskManager
from ..oracle import finite_tau_constant, unit_density, visibility_limit_numeric
from ..phased_complex import PhasedComplex
from ..space_time import (
    ComplexFrequency,
    PointLike,
    ProbeDirection,
    SpaceTimePoint,
    as_space_time_arrays,
    make_z,
    phase_exponent,
)
from ..variables import (
    ConeRegion,
    KernelConfig,
    MeasurementSet,
    ReconstructionEstimate,
    ScenarioGeometry,
    VisibilityConstant,
)
from .functional import TestFunctionValues, boundary_functional

logger = logging.getLogger(__name__)

MAX_PAIRS = 2**15
ERROR_FACTOR = 1e3
CONSTANT_MODES = ("analytic", "calibrated", "finite_tau")
DEFAULT_CALIBRATION_TAUS = (50.0, 100.0, 200.0, 400.0)


class ConeNodes:
    """Nodes of the cone rule with log(w_q) + Re phase(q) and Im phase(q)"""

    def __init__(self, cone: ConeRegion, z: ComplexFrequency, order: int = 16):
        rule = concatenate(enclosure_rule(cone, z, order))
        self.x = rule.points[:, :-1]
        self.t = rule.points[:, -1]
        phase = phase_exponent(z, (self.x, self.t))
        self.log_weight = np.log(rule.weights) + phase.real
        self.arg = phase.imag
        logger.debug("Enclosure cone rule with %d node(s)", len(self.t))

    def __len__(self) -> int:
        return len(self.t)


def _convolve(z, nodes: ConeNodes, x, t, cfg, gradient):
    """v (and grad v) at a block of points, each a pairwise sum over the cone nodes"""
    P, Q, n = len(t), len(nodes), x.shape[1]
    dx = (x[:, None, :] - nodes.x[None, :, :]).reshape(P * Q, n)
    dt = (t[:, None] - nodes.t[None, :]).reshape(P * Q)
    samples = kernel_samples(z, dx, dt, cfg, gradient=gradient)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = samples.error * np.exp(samples.exponent - samples.log_scale)
        relative = ratio / np.maximum(1.0, np.abs(samples.value))
    worst = float(np.max(relative, initial=0.0))
    if worst > ERROR_FACTOR * cfg.quad_tol:
        raise QuadratureConvergenceError(worst, ERROR_FACTOR * cfg.quad_tol, "Enclosure kernel quadrature")

    q_factor = PhasedComplex(nodes.log_weight, nodes.arg)
    log_scale = samples.log_scale.reshape(P, Q)
    v = (PhasedComplex.from_scaled(log_scale, samples.value.reshape(P, Q)) * q_factor).total(axis=1)
    grad = None
    if gradient:
        components = [
            (PhasedComplex.from_scaled(log_scale, samples.gradient[:, k].reshape(P, Q)) * q_factor).total(axis=1)
            for k in range(n)
        ]
        grad = PhasedComplex(
            np.stack([c.log_mag for c in components], axis=-1),
            np.stack([c.arg for c in components], axis=-1),
        )
    with np.errstate(divide="ignore"):
        log_error = logsumexp(
            (np.log(samples.error) + samples.exponent).reshape(P, Q) + nodes.log_weight[None, :], axis=1
        )
    return v, grad, log_error


def _stack(parts: list[PhasedComplex]) -> PhasedComplex:
    return PhasedComplex(
        np.concatenate([p.log_mag for p in parts]),
        np.concatenate([p.arg for p in parts]),
    )


def enclosure_field(
    z: ComplexFrequency,
    cone: ConeRegion,
    x: np.ndarray,
    t: np.ndarray,
    cfg: KernelConfig = DEFAULT_CONFIG,
    gradient: bool = False,
    manager: Optional[DaskManager] = None,
    nodes: Optional[ConeNodes] = None,
) -> tuple[PhasedComplex, Optional[PhasedComplex], np.ndarray]:
    """v, grad v (trailing axis of n components) and log error bounds at points outside the closed cone"""
    inside = cone.closure_contains(np.hstack([x, t[:, None]]))
    if np.any(inside):
        raise ConeProximityError(int(np.sum(inside)))
    manager = manager or DaskManager()
    nodes = nodes or ConeNodes(cone, z)
    block = max(1, MAX_PAIRS // len(nodes))

    def chunk(xc, tc):
        results = [
            _convolve(z, nodes, xc[s : s + block], tc[s : s + block], cfg, gradient)
            for s in range(0, len(tc), block)
        ]
        v = _stack([r[0] for r in results])
        grad = _stack([r[1] for r in results]) if gradient else None
        return v, grad, np.concatenate([r[2] for r in results])

    results = manager.map_chunks(chunk, x, t)
    v = _stack([r[0] for r in results])
    grad = _stack([r[1] for r in results]) if gradient else None
    return v, grad, np.concatenate([r[2] for r in results])


def enclosure_v(
    z: ComplexFrequency,
    cone: ConeRegion,
    p: PointLike,
    cfg: KernelConfig = DEFAULT_CONFIG,
    manager: Optional[DaskManager] = None,
) -> PhasedComplex:
    """The enclosure test function at a point (0-d result) or at arrays of points"""
    x, t = as_space_time_arrays(p)
    v, __, __ = enclosure_field(z, cone, x, t, cfg, manager=manager)
    if isinstance(p, SpaceTimePoint):
        return v[0]
    return v


class EnclosureTestFunction:
    def __init__(
        self,
        z: ComplexFrequency,
        cone: ConeRegion,
        cfg: KernelConfig = DEFAULT_CONFIG,
        manager: Optional[DaskManager] = None,
    ):
        self.z = z
        self.cone = cone
        self.cfg = cfg
        self.manager = manager or DaskManager()
        self.nodes = ConeNodes(cone, z)

    def evaluate(self, x: np.ndarray, t: np.ndarray, normal: Optional[np.ndarray] = None) -> TestFunctionValues:
        v, grad, log_error = enclosure_field(
            self.z, self.cone, x, t, self.cfg, normal is not None, self.manager, self.nodes
        )
        dv = None
        if normal is not None:
            dv = (grad * normal).total(axis=1)
        return TestFunctionValues(v=v, dv=dv, log_error=log_error)


def operative_constant(
    cone: ConeRegion,
    mode: str = "calibrated",
    z: Optional[ComplexFrequency] = None,
    calibration_taus: Optional[list[float]] = None,
    manager: Optional[DaskManager] = None,
) -> VisibilityConstant:
    """(mu, C) used to scale I(tau): closed form, oracle fit, or tau^mu M(tau) at the current z"""
    if mode == "analytic":
        constant = analytic_constant(cone)
    elif mode == "calibrated":
        fit = visibility_limit_numeric(
            cone, unit_density, calibration_taus or DEFAULT_CALIBRATION_TAUS, manager=manager
        )
        constant = VisibilityConstant(mu=fit.mu_used, C=fit.C_fit)
    elif mode == "finite_tau":
        if z is None:
            raise ValueError("The finite_tau constant needs the complex frequency z")
        mu = analytic_constant(cone).mu
        constant = VisibilityConstant(mu=mu, C=finite_tau_constant(cone, z, mu))
    else:
        raise ValueError(f"Unknown constant mode '{mode}' (choose from {CONSTANT_MODES})")
    logger.info("Operative constant (%s): mu=%g, C=%s", mode, constant.mu, constant.C)
    return constant


def _check_cone_inside(cone: ConeRegion, geom: ScenarioGeometry) -> None:
    x, t = cone.vertices[:, :-1], cone.vertices[:, -1]
    inside = geom.domain.contains(x) & (t > 0) & (t < geom.T)
    # the vertex is the target itself
    if not np.all(inside[1:]):
        raise GeometryError(f"cone with delta={cone.delta} leaves the space-time cylinder")


def enclosure_estimate(
    data: MeasurementSet,
    geom: ScenarioGeometry,
    cone: ConeRegion,
    probe: ProbeDirection,
    tau: float,
    constant: Union[VisibilityConstant, str] = "calibrated",
    cfg: KernelConfig = DEFAULT_CONFIG,
    min_margin: float = 0.0,
    manager: Optional[DaskManager] = None,
    calibration_taus: Optional[list[float]] = None,
) -> ReconstructionEstimate:
    """-(1/C) tau^mu exp(-phase(target)) I(tau) with the enclosure test function"""
    validate_config(geom, probe, min_margin)
    _check_cone_inside(cone, geom)
    z = make_z(probe, tau)
    if isinstance(constant, str):
        constant = operative_constant(cone, constant, z, calibration_taus, manager)

    v_eval = EnclosureTestFunction(z, cone, cfg, manager)
    value, log_error = boundary_functional(data, v_eval)
    phase = phase_exponent(z, cone.target)
    log_scale = constant.mu * np.log(tau) - phase.real
    scaled = value.scale_exp(-phase) * tau**constant.mu
    estimate = -scaled.to_complex() / constant.C
    logger.info("Enclosure estimate at tau=%g: %s", tau, estimate)
    with np.errstate(over="ignore"):
        phase_scale = float(np.exp(log_scale))
        quad_error = float(np.exp(log_error + log_scale) / abs(constant.C))
    return ReconstructionEstimate(
        tau=float(tau),
        estimate=complex(estimate),
        phase_scale=phase_scale,
        quad_error=quad_error,
        method="enclosure",
    )
