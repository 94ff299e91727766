"""Invariant suite for the kernels, used by the verify-kernel command."""

from __future__ import annotations

import logging

import numpy as np
import pandas as pd
from scipy.special import roots_legendre

from ..space_time import ComplexFrequency, complex_frequency, make_probe, make_z
from ..variables import KernelConfig
from .heat_kernel import (
    DEFAULT_CONFIG,
    eval_G_z,
    eval_K_z,
    eval_K_z_exterior,
    eval_K_z_split,
    eval_w_z,
    kernel_samples,
)
from .radial import radial_integrals

logger = logging.getLogger(__name__)

STEP = 1e-3


def _probe_z(n: int, c: float, tau: float) -> ComplexFrequency:
    if n == 1:
        return make_z(make_probe(c, [1.0]), tau)
    omega = np.zeros(n)
    omega[0] = 1.0
    perp = np.zeros(n)
    perp[1] = 1.0
    return make_z(make_probe(c, omega, perp), tau)


def _sample_points(rng: np.random.Generator, n: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Points away from the singular point and from the steep heat term near t=0-"""
    x = rng.uniform(-1.0, 1.0, (count, n))
    forward = rng.uniform(size=count) < 0.5
    t = np.where(forward, rng.uniform(0.05, 1.0, count), rng.uniform(-1.0, -0.25, count))
    return x, t


def _relative(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(a - b) / np.maximum(np.abs(a), np.abs(b))


def residual_check(n: int, count: int, rng: np.random.Generator, cfg: KernelConfig) -> float:
    """Largest relative finite-difference backward-heat residual (K_t + ΔK)"""
    z = _probe_z(n, c=1.0, tau=2.0)
    x, t = _sample_points(rng, n, count)
    stencil = [kernel_samples(z, x, t + ht, cfg) for ht in (STEP, -STEP)]
    shifted = []
    for k in range(n):
        step = np.zeros(n)
        step[k] = STEP
        shifted.append([kernel_samples(z, x + s * step, t, cfg, gradient=True) for s in (1, -1)])
    centre = kernel_samples(z, x, t, cfg)

    m = np.max([s.log_scale for s in stencil + [p for pair in shifted for p in pair] + [centre]], axis=0)

    def scaled(s, values):
        return values * np.exp(s.log_scale - m)

    k_t = (scaled(stencil[0], stencil[0].value) - scaled(stencil[1], stencil[1].value)) / (2 * STEP)
    lap = np.zeros(len(t))
    for k, (plus, minus) in enumerate(shifted):
        lap += (scaled(plus, plus.gradient[:, k]) - scaled(minus, minus.gradient[:, k])) / (2 * STEP)
    scale = np.abs(k_t) + np.abs(lap) + abs(z.zz) * np.abs(scaled(centre, centre.value))
    return float(np.max(np.abs(k_t + lap) / scale))


def translation_check(n: int, count: int, rng: np.random.Generator, cfg: KernelConfig) -> float:
    """G_z(x, t) against G_{i Im z}(x - 2t Re z, t)"""
    z = _probe_z(n, c=1.5, tau=3.0)
    z_imag = complex_frequency(1j * z.b)
    x, t = _sample_points(rng, n, count)
    g = eval_G_z(z, (x, t), cfg).value.to_complex()
    g_shift = eval_G_z(z_imag, (x - 2 * t[:, None] * z.a[None, :], t), cfg).value.to_complex()
    return float(np.max(_relative(g, g_shift)))


def scaling_check(n: int, count: int, rng: np.random.Generator, cfg: KernelConfig, lam: float = 2.0) -> float:
    """G_{lam z}(x, t) against lam^n G_z(lam x, lam² t) for purely imaginary z"""
    b = rng.uniform(0.5, 1.5, n)
    z = complex_frequency(1j * b)
    z_scaled = complex_frequency(1j * lam * b)
    x, t = _sample_points(rng, n, count)
    g = eval_G_z(z_scaled, (x, t), cfg).value.to_complex()
    g_scaled = lam**n * eval_G_z(z, (lam * x, lam**2 * t), cfg).value.to_complex()
    return float(np.max(_relative(g, g_scaled)))


def branch_check(n: int, count: int, rng: np.random.Generator, cfg: KernelConfig, eps: float = 1e-12) -> float:
    """|K_z(x, eps) - K_z(x, -eps)| at fixed x != 0, relative to |K_z(x, 0)|"""
    z = _probe_z(n, c=1.0, tau=2.0)
    x = rng.uniform(0.3, 1.0, (count, n)) * rng.choice([-1.0, 1.0], (count, n))
    above = eval_K_z(z, (x, np.full(count, eps)), cfg).value.to_complex()
    below = eval_K_z(z, (x, np.full(count, -eps)), cfg).value.to_complex()
    return float(np.max(np.abs(above - below) / np.maximum(1.0, np.abs(above))))


def cancellation_check(n: int, count: int, rng: np.random.Generator, cfg: KernelConfig) -> float:
    """Heat term plus w_z against the exterior form where |b|²|t| <= 2"""
    z = _probe_z(n, c=1.0, tau=2.0)
    x = rng.uniform(-1.0, 1.0, (count, n))
    t = -rng.uniform(0.1, 2.0, count) / z.b_norm**2
    split = eval_K_z_split(z, (x, t), cfg).value.to_complex()
    exterior = eval_K_z_exterior(z, (x, t), cfg).value.to_complex()
    return float(np.max(_relative(split, exterior)))


def bessel_reduction_check(count: int, rng: np.random.Generator, cfg: KernelConfig) -> float:
    """Radial J0 form of the n=2 ball integral against a polar tensor rule"""
    eta = rng.uniform(0.0, 20.0, count)
    alpha = rng.uniform(-2.0, 2.0, count)
    radial, __, __ = radial_integrals(2, eta, alpha, np.zeros(count), np.ones(count), cfg)

    r, wr = roots_legendre(96)
    r, wr = (r + 1) / 2, wr / 2
    theta = 2 * np.pi * np.arange(128) / 128
    angular = np.cos(eta[:, None, None] * r[None, :, None] * np.cos(theta)[None, None, :])
    inner = angular.mean(axis=2) * 2 * np.pi
    direct = np.sum(wr * r * np.exp(alpha[:, None] * (r**2 - 1)) * inner, axis=1)
    return float(np.max(np.abs(radial - direct)))


def realness_check(count: int, rng: np.random.Generator, cfg: KernelConfig) -> float:
    """|Im| of a complex-form quadrature of the n=1 ball integral, and w_z stays on the real axis"""
    z = _probe_z(1, c=1.0, tau=2.0)
    x, t = _sample_points(rng, 1, count)
    eta = z.b_norm * (x[:, 0] - 2 * t * z.a[0])
    xi, w = roots_legendre(200)
    values = np.exp(1j * eta[:, None] * xi[None, :]) * np.exp(z.b_norm**2 * t[:, None] * (xi[None, :] ** 2 - 1))
    imag = np.abs(np.sum(w * values, axis=1).imag)
    w_z = eval_w_z(z, (x, t), cfg).value
    off_axis = np.abs(np.sin(w_z.arg))
    return float(max(np.max(imag), np.max(off_axis)))


def run_kernel_checks(count: int = 100, seed: int = 0, cfg: KernelConfig = DEFAULT_CONFIG) -> pd.DataFrame:
    """Runs the kernel invariants and reports the worst error of each"""
    rng = np.random.default_rng(seed)
    rows = []

    def record(check: str, n: int, samples: int, error: float, tolerance: float):
        passed = bool(np.isfinite(error) and error <= tolerance)
        level = logging.INFO if passed else logging.WARNING
        logger.log(level, "%s (n=%d): %.3g (tolerance %.1g)", check, n, error, tolerance)
        rows.append(
            {"check": check, "n": n, "samples": samples, "max_error": error, "tolerance": tolerance, "passed": passed}
        )

    for n in (1, 2):
        record("residual", n, 2 * count, residual_check(n, 2 * count, rng, cfg), 1e-4)
        record("translation", n, count, translation_check(n, count, rng, cfg), 1e-9)
        record("scaling", n, count, scaling_check(n, count, rng, cfg), 1e-9)
        record("branch_consistency", n, count, branch_check(n, count, rng, cfg), 10 * cfg.quad_tol)
        record("cancellation_guard", n, count, cancellation_check(n, count, rng, cfg), 1e-8)
    record("bessel_reduction", 2, count, bessel_reduction_check(count, rng, cfg), 1e-8)
    record("w_z_real", 1, count, realness_check(count, rng, cfg), cfg.quad_tol)
    return pd.DataFrame(rows)
