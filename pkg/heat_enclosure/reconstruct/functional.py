"""The boundary functional

    I(tau) = int_Gamma {(dv/dnu + rho v) u - h0 v} dS dt - int_U v(x,0) u(x,0) dx

accumulated in phase-factored form with pairwise summation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np
from scipy.special import logsumexp

from ..errors import DimensionError
from ..geometry import validate_config
from ..phased_complex import PhasedComplex
from ..space_time import ComplexFrequency
from ..variables import MeasurementSet, ScenarioGeometry

logger = logging.getLogger(__name__)


@dataclass
class TestFunctionValues:
    """v and dv/dnu at sample points, and the log of an absolute error bound on v"""

    __test__ = False
    v: PhasedComplex
    dv: Optional[PhasedComplex]
    log_error: np.ndarray


class TestFunction(Protocol):
    __test__ = False
    z: ComplexFrequency

    def evaluate(self, x: np.ndarray, t: np.ndarray, normal: Optional[np.ndarray] = None) -> TestFunctionValues:
        ...


def _log_abs(values: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values))


def boundary_functional(data: MeasurementSet, v_eval: TestFunction) -> tuple[PhasedComplex, float]:
    """I(tau) and the log of its propagated quadrature error"""
    if data.n != v_eval.z.n:
        raise DimensionError(data.n, v_eval.z.n)
    lateral = v_eval.evaluate(data.gamma_x, data.gamma_t, data.normal)
    initial = v_eval.evaluate(data.initial_x, np.zeros(len(data.initial_x)))

    wu = data.weight * data.u
    gamma_terms = (lateral.dv + lateral.v * data.rho) * wu - lateral.v * (data.weight * data.h0)
    initial_terms = -(initial.v * (data.initial_weight * data.initial_u))
    terms = PhasedComplex(
        np.concatenate([gamma_terms.log_mag, initial_terms.log_mag]),
        np.concatenate([gamma_terms.arg, initial_terms.arg]),
    )
    value = terms.total()

    gamma_scale = data.weight * ((1 + np.abs(data.rho)) * np.abs(data.u) + np.abs(data.h0))
    initial_scale = data.initial_weight * np.abs(data.initial_u)
    log_error = logsumexp(
        np.concatenate(
            [
                lateral.log_error + _log_abs(gamma_scale),
                initial.log_error + _log_abs(initial_scale),
                [-np.inf],
            ]
        )
    )
    logger.debug("I(tau) over %d term(s), log quadrature error %.3g", len(terms.log_mag), log_error)
    return value, float(log_error)


def assemble_I_tau(
    data: MeasurementSet,
    v_eval: TestFunction,
    geom: ScenarioGeometry,
    tau: float,
    min_margin: float = 0.0,
) -> complex:
    """I(tau) as a complex number after checking the half-space configuration"""
    if geom.n != data.n:
        raise DimensionError(data.n, geom.n)
    if not np.isclose(v_eval.z.tau, tau):
        raise ValueError(f"Test function was built for tau={v_eval.z.tau}, not tau={tau}")
    if v_eval.z.probe is not None:
        validate_config(geom, v_eval.z.probe, min_margin)
    value, __ = boundary_functional(data, v_eval)
    return value.to_complex()
