"""The backward-heat fundamental solution K_z, its entire part w_z and G_z.

With E = x·a - t|a|² + t|b|², eta = |b|·|x - 2ta| and alpha = |b|²t:

    w_z = -exp(E) (|b|/2pi)^n  int_0^1 exp(alpha(r²-1)) r^(n-1) S_n(eta r) dr
    K_z = w_z                                      for t >= 0
    K_z = +exp(E) (|b|/2pi)^n  int_1^inf (...) dr  for t < 0
    K_z = heat(x, t) + w_z                         for t < 0

The exterior form is the default for t < 0. The heat split takes over only
next to t = 0- where the truncated shell outgrows max_panels, or for
|b|²|t| <= R when asked for explicitly.

All values are returned as a log-scale and a real mantissa so that exp(E)
is never formed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ImaginaryPartZeroError, KernelSingularityError
from ..phased_complex import PhasedComplex
from ..space_time import ComplexFrequency, PointLike, as_space_time_arrays, phase_exponent
from ..variables import KernelConfig, KernelValue
from .radial import ball_integrals, shell_fits, shell_integrals

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = KernelConfig()


@dataclass
class KernelSamples:
    """K = value*exp(log_scale), grad K = gradient*exp(log_scale)"""

    log_scale: np.ndarray
    value: np.ndarray
    gradient: Optional[np.ndarray]
    exponent: np.ndarray
    error: np.ndarray

    def phased(self) -> PhasedComplex:
        return PhasedComplex.from_scaled(self.log_scale, self.value)

    def phased_gradient(self) -> PhasedComplex:
        return PhasedComplex.from_scaled(self.log_scale[:, None], self.gradient)


def _check_frequency(z: ComplexFrequency) -> None:
    if z.b_norm == 0.0:
        raise ImaginaryPartZeroError()


def _geometry(z: ComplexFrequency, x: np.ndarray, t: np.ndarray):
    a, bn = z.a, z.b_norm
    exponent = x @ a - t * (a @ a) + t * bn**2
    y = x - 2 * t[:, None] * a[None, :]
    y_norm = np.linalg.norm(y, axis=1)
    y_hat = np.where(y_norm[:, None] > 0, y / np.where(y_norm > 0, y_norm, 1.0)[:, None], 0.0)
    return exponent, bn * y_norm, y_hat, bn**2 * t


def _entire_part(z, x, t, cfg, gradient) -> KernelSamples:
    """w_z for all rows"""
    n, bn = z.n, z.b_norm
    exponent, eta, y_hat, alpha = _geometry(z, x, t)
    B, dB, err, shift = ball_integrals(n, eta, alpha, cfg, derivative=gradient)
    log_pre = n * np.log(bn / (2 * np.pi))
    value = -B
    grad = None
    if gradient:
        grad = z.a[None, :] * value[:, None] - (bn * dB)[:, None] * y_hat
    return KernelSamples(
        log_scale=exponent + log_pre + shift,
        value=value,
        gradient=grad,
        exponent=exponent,
        error=np.exp(log_pre + shift) * err,
    )


def _exterior_part(z, x, t, cfg, gradient) -> KernelSamples:
    """The t<0 representation over |xi|>1"""
    n, bn = z.n, z.b_norm
    exponent, eta, y_hat, alpha = _geometry(z, x, t)
    B, dB, err = shell_integrals(n, eta, alpha, cfg, derivative=gradient)
    log_pre = n * np.log(bn / (2 * np.pi))
    grad = None
    if gradient:
        grad = z.a[None, :] * B[:, None] + (bn * dB)[:, None] * y_hat
    return KernelSamples(
        log_scale=exponent + log_pre,
        value=B,
        gradient=grad,
        exponent=exponent,
        error=np.exp(log_pre) * err,
    )


def _add_heat_term(samples: KernelSamples, x: np.ndarray, t: np.ndarray) -> KernelSamples:
    """Adds (4pi|t|)^(-n/2) exp(|x|²/4t) for t<0"""
    n = x.shape[1]
    log_heat = -(n / 2) * np.log(4 * np.pi * np.abs(t)) + np.sum(x**2, axis=1) / (4 * t)
    m = np.maximum(samples.log_scale, log_heat)
    w_part = np.exp(samples.log_scale - m)
    h_part = np.exp(log_heat - m)
    value = samples.value * w_part + h_part
    grad = None
    if samples.gradient is not None:
        grad = samples.gradient * w_part[:, None] + (x / (2 * t[:, None])) * h_part[:, None]
    return KernelSamples(m, value, grad, samples.exponent, samples.error)


def _merge(P: int, n: int, parts: list[tuple[np.ndarray, KernelSamples]], gradient: bool) -> KernelSamples:
    merged = KernelSamples(
        log_scale=np.zeros(P),
        value=np.zeros(P),
        gradient=np.zeros((P, n)) if gradient else None,
        exponent=np.zeros(P),
        error=np.zeros(P),
    )
    for mask, part in parts:
        merged.log_scale[mask] = part.log_scale
        merged.value[mask] = part.value
        merged.exponent[mask] = part.exponent
        merged.error[mask] = part.error
        if gradient:
            merged.gradient[mask] = part.gradient
    return merged


def _check_singular(x: np.ndarray, t: np.ndarray) -> None:
    singular = (t == 0) & np.all(x == 0, axis=1)
    if np.any(singular):
        raise KernelSingularityError()


def kernel_samples(
    z: ComplexFrequency,
    x: np.ndarray,
    t: np.ndarray,
    cfg: KernelConfig = DEFAULT_CONFIG,
    gradient: bool = False,
    split: bool = False,
) -> KernelSamples:
    """K_z (and its spatial gradient) at arrays of points, x (P, n), t (P,).

    For t < 0 the exterior form is used wherever its truncated shell fits in
    max_panels; the heat term plus w_z covers the rest, which lies next to
    t = 0- where |b|²|t| is tiny. With split=True the heat term plus w_z is
    used for every t < 0 with |b|²|t| <= branch_R instead."""
    _check_frequency(z)
    _check_singular(x, t)
    P, n = x.shape
    __, eta, __, alpha = _geometry(z, x, t)
    backward = t < 0
    if split:
        heat = backward & (-alpha <= cfg.branch_R)
    else:
        heat = np.zeros(P, dtype=bool)
        heat[backward] = ~shell_fits(eta[backward], alpha[backward], cfg)
    exterior = backward & ~heat
    interior = ~exterior

    parts = []
    if np.any(interior):
        part = _entire_part(z, x[interior], t[interior], cfg, gradient)
        sub_heat = heat[interior]
        parts.append((interior & ~heat, _subset(part, ~sub_heat)))
        if np.any(sub_heat):
            parts.append((heat, _add_heat_term(_subset(part, sub_heat), x[heat], t[heat])))
    if np.any(exterior):
        parts.append((exterior, _exterior_part(z, x[exterior], t[exterior], cfg, gradient)))
    return _merge(P, n, parts, gradient)


def _subset(samples: KernelSamples, mask: np.ndarray) -> KernelSamples:
    return KernelSamples(
        samples.log_scale[mask],
        samples.value[mask],
        None if samples.gradient is None else samples.gradient[mask],
        samples.exponent[mask],
        samples.error[mask],
    )


def _single(p: PointLike, result):
    if hasattr(p, "x"):
        return result[0]
    return result


def _arrays(z: ComplexFrequency, p: PointLike) -> tuple[np.ndarray, np.ndarray]:
    x, t = as_space_time_arrays(p)
    if x.shape[1] != z.n:
        raise ValueError(f"Point dimension {x.shape[1]} does not match z of dimension {z.n}")
    return x, t


def eval_w_z(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> KernelValue:
    """The real entire part w_z"""
    _check_frequency(z)
    x, t = _arrays(z, p)
    part = _entire_part(z, x, t, cfg, gradient=False)
    return KernelValue(_single(p, part.phased()), _single(p, part.error))


def eval_K_z(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> KernelValue:
    x, t = _arrays(z, p)
    samples = kernel_samples(z, x, t, cfg)
    return KernelValue(_single(p, samples.phased()), _single(p, samples.error))


def grad_K_z(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> PhasedComplex:
    """Spatial gradient; the trailing axis holds the n components"""
    x, t = _arrays(z, p)
    samples = kernel_samples(z, x, t, cfg, gradient=True)
    return _single(p, samples.phased_gradient())


def eval_G_z(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> KernelValue:
    """exp(-phase) K_z"""
    x, t = _arrays(z, p)
    samples = kernel_samples(z, x, t, cfg)
    g = samples.phased().scale_exp(-phase_exponent(z, (x, t)))
    return KernelValue(_single(p, g), _single(p, samples.error))


def eval_K_z_split(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> KernelValue:
    """heat + w_z for t<0 regardless of branch_R; cross-check of the exterior form"""
    x, t = _arrays(z, p)
    if np.any(t >= 0):
        raise ValueError("The heat split only applies to t < 0")
    part = _add_heat_term(_entire_part(z, x, t, cfg, gradient=False), x, t)
    return KernelValue(_single(p, part.phased()), _single(p, part.error))


def eval_K_z_exterior(z: ComplexFrequency, p: PointLike, cfg: KernelConfig = DEFAULT_CONFIG) -> KernelValue:
    """The exterior representation for t<0 regardless of branch_R"""
    _check_frequency(z)
    x, t = _arrays(z, p)
    if np.any(t >= 0):
        raise ValueError("The exterior representation only applies to t < 0")
    part = _exterior_part(z, x, t, cfg, gradient=False)
    return KernelValue(_single(p, part.phased()), _single(p, part.error))
