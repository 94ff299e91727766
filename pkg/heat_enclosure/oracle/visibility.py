"""Numeric visibility limits of cones.

M(tau) = exp(-phase(target)) int_D exp(phase) rho is computed on the cone
with the phase measured from the vertex, so its real part never exceeds 0
and no factor overflows. The fit is two-stage: mu from the log-log slope of
|M|, then C from tau^mu M(tau) / rho(target) over the two largest tau.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ..errors import QuadratureConvergenceError
from ..geometry import (
    analytic_constant,
    enclosure_rule,
    phase_adapted_rule,
    simplex_constant,
    triangle_limit_constant,
)
from ..managers import DaskManager
from ..phased_complex import pairwise_sum
from ..space_time import ComplexFrequency, make_z
from ..variables import ConeRegion, VisibilityFit

logger = logging.getLogger(__name__)

Density = Callable[[np.ndarray], np.ndarray]

MIN_TAUS = 4
MU_SNAP = 0.1


def unit_density(points: np.ndarray) -> np.ndarray:
    return np.ones(len(points))


def _moment(chunks, z: ComplexFrequency, density: Density) -> complex:
    """exp(-phase(target)) sum_q w_q rho(q) exp(phase(q))"""
    exponent = np.append(z.z, -z.zz)
    partial = []
    for chunk in chunks:
        terms = chunk.weights * density(chunk.points) * np.exp(chunk.offsets @ exponent)
        partial.append(pairwise_sum(terms))
    return complex(pairwise_sum(np.array(partial))) if partial else 0j


def moment(
    cone: ConeRegion,
    z: ComplexFrequency,
    density: Density = unit_density,
    cutoff: Optional[float] = 40.0,
    tol: float = 1e-10,
    max_levels: int = 6,
) -> complex:
    """M(tau) with the phase-adapted rule, refined until two levels agree to tol"""
    previous, error = None, np.inf
    for level in range(max_levels + 1):
        scale = 2.0**-level
        chunks = phase_adapted_rule(
            cone,
            z,
            radians_per_panel=2 * np.pi * scale,
            efolds_per_panel=8.0 * scale,
            cutoff=cutoff,
        )
        current = _moment(chunks, z, density)
        if previous is not None:
            error = abs(current - previous)
            if error <= tol * max(abs(current), np.finfo(float).tiny):
                return current
        previous = current
    if abs(current) == 0:
        return current
    raise QuadratureConvergenceError(error, tol * abs(current), f"Cone moment at tau={z.tau}")


def finite_tau_constant(cone: ConeRegion, z: ComplexFrequency, mu: float) -> complex:
    """tau^mu M(tau) with rho = 1 on the enclosure cone rule"""
    return complex(z.tau**mu * _moment(enclosure_rule(cone, z), z, unit_density))


def visibility_limit_numeric(
    cone: ConeRegion,
    density: Density = unit_density,
    taus: list[float] = (50.0, 100.0, 200.0, 400.0),
    cutoff: Optional[float] = 40.0,
    tol: float = 1e-10,
    max_levels: int = 6,
    manager: Optional[DaskManager] = None,
) -> VisibilityFit:
    """Fits (mu, C) of the limit tau^mu M(tau) -> C rho(target)"""
    taus = np.asarray(taus, dtype=float)
    if len(taus) < MIN_TAUS or np.any(np.diff(taus) <= 0):
        raise ValueError(f"Visibility fits need at least {MIN_TAUS} increasing tau values, got {list(taus)}")
    manager = manager or DaskManager()
    tasks = [
        lambda tau=tau: moment(cone, make_z(cone.probe, tau), density, cutoff, tol, max_levels)
        for tau in taus
    ]
    moments = np.array(manager.compute(tasks))
    for tau, m in zip(taus, moments):
        logger.info("M(%g) = %s", tau, m)

    rho0 = float(density(cone.target.as_array()[None, :])[0])
    if np.all(moments == 0):
        logger.warning("All cone moments vanish (zero density), the fit is undefined")
        return VisibilityFit(
            mu_fit=np.nan,
            C_fit=complex(np.nan, np.nan),
            per_tau=[(tau, 0j) for tau in taus],
            residual=np.nan,
            moments=list(moments),
        )

    log_tau, log_m = np.log(taus), np.log(np.abs(moments))
    slope, intercept = np.polyfit(log_tau, log_m, 1)
    residual = float(np.sqrt(np.mean((log_m - (slope * log_tau + intercept)) ** 2)))
    mu_fit = -float(slope)
    mu_used = float(np.round(mu_fit)) if abs(mu_fit - np.round(mu_fit)) <= MU_SNAP else mu_fit

    if rho0 == 0:
        logger.warning("Density vanishes at the cone vertex, C is undefined")
        scaled = np.full(len(taus), complex(np.nan, np.nan))
    else:
        scaled = taus**mu_used * moments / rho0
    C_fit = complex(np.mean(scaled[-2:]))
    logger.info("Visibility fit: mu=%.4f (used %g), C=%s", mu_fit, mu_used, C_fit)
    return VisibilityFit(
        mu_fit=mu_fit,
        C_fit=C_fit,
        per_tau=list(zip(taus.tolist(), scaled.tolist())),
        residual=residual,
        mu_used=mu_used,
        moments=list(moments),
    )


def calibration_report(cone: ConeRegion, fit: VisibilityFit) -> pd.DataFrame:
    """Fitted and closed-form constants side by side with their ratios"""
    analytic = analytic_constant(cone)
    row = {
        "n": cone.n,
        "c": cone.probe.c,
        "delta": cone.delta,
        "tau_max": fit.per_tau[-1][0],
        "mu_fit": fit.mu_fit,
        "mu_used": fit.mu_used,
        "residual": fit.residual,
        "re_C_fit": fit.C_fit.real,
        "im_C_fit": fit.C_fit.imag,
        "mu_analytic": analytic.mu,
        "re_C_analytic": analytic.C.real,
        "im_C_analytic": analytic.C.imag,
        "ratio_fit_analytic": abs(fit.C_fit / analytic.C),
    }
    if cone.n == 1:
        triangle = triangle_limit_constant(cone)
        row.update(
            {
                "re_C_triangle": triangle.real,
                "im_C_triangle": triangle.imag,
                "ratio_fit_triangle": abs(fit.C_fit / triangle),
                "ratio_analytic_triangle": abs(analytic.C / triangle),
            }
        )
    else:
        simplex = simplex_constant(cone)
        row.update(
            {
                "re_C_simplex": simplex.C.real,
                "im_C_simplex": simplex.C.imag,
                "ratio_fit_simplex": abs(fit.C_fit / simplex.C),
                "ratio_analytic_simplex": abs(analytic.C / simplex.C),
            }
        )
    return pd.DataFrame([row])
