"""Radial reduction of the ball and shell integrals of the kernels.

Integrals of exp(alpha*(r²-1)) r^(n-1) S_n(eta*r) over [lower, upper] are
computed on dyadic panels of 16-point Gauss-Legendre rules, with an 8-point
companion rule for the error estimate. Points still above quad_tol after the
last refinement raise QuadratureConvergenceError.
"""

import logging

import numpy as np
from scipy.special import roots_legendre

from ..errors import QuadratureConvergenceError
from ..variables import KernelConfig
from .bessel import bessel_surface_kernel, bessel_surface_kernel_derivative

logger = logging.getLogger(__name__)

MAX_NODES = 2**21
REFINEMENTS = 3
EFOLDS_PER_PANEL = 4.0
MAX_PANEL_WIDTH = 0.5


def _unit_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return (nodes + 1) / 2, weights / 2


GL16 = _unit_rule(16)
GL8 = _unit_rule(8)


def uncapped_panel_counts(length: np.ndarray, eta: np.ndarray, alpha: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Dyadic panel counts resolving half a period and four e-folds per panel"""
    with np.errstate(divide="ignore"):
        h_osc = np.where(eta > 0, np.pi / np.where(eta > 0, eta, 1.0), np.inf)
        rate = np.abs(alpha) * upper
        h_decay = np.where(rate > 0, 2 * EFOLDS_PER_PANEL / np.where(rate > 0, 2 * rate, 1.0), np.inf)
    h = np.minimum(np.minimum(h_osc, h_decay), MAX_PANEL_WIDTH)
    counts = np.maximum(1.0, np.ceil(length / h))
    return 2.0 ** np.ceil(np.log2(counts))


def panel_counts(
    length: np.ndarray,
    eta: np.ndarray,
    alpha: np.ndarray,
    upper: np.ndarray,
    cfg: KernelConfig,
) -> np.ndarray:
    counts = uncapped_panel_counts(length, eta, alpha, upper)
    if np.any(counts > cfg.max_panels):
        logger.warning(
            "Radial quadrature capped at %d panels for %d point(s)",
            cfg.max_panels,
            int(np.sum(counts > cfg.max_panels)),
        )
    return np.minimum(counts, cfg.max_panels).astype(int)


def _panel_rule(n, eta, alpha, offset, lower, length, panels, rule, derivative):
    nodes, weights = rule
    u = ((np.arange(panels)[:, None] + nodes[None, :]) / panels).ravel()
    w = np.tile(weights, panels) / panels
    r = lower[:, None] + length[:, None] * u[None, :]
    envelope = np.exp(alpha[:, None] * (r**2 - 1) - offset[:, None])
    envelope *= length[:, None] * w[None, :]
    s = eta[:, None] * r
    value = np.sum(envelope * r ** (n - 1) * bessel_surface_kernel(n, s), axis=1)
    if not derivative:
        return value, None
    deriv = np.sum(envelope * r**n * bessel_surface_kernel_derivative(n, s), axis=1)
    return value, deriv


def radial_integrals(
    n: int,
    eta: np.ndarray,
    alpha: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    cfg: KernelConfig,
    derivative: bool = False,
    offset: np.ndarray = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, derivative-kernel integral (r^n S_n') and |Q16 - Q8| per point.

    The integrand is exp(alpha*(r²-1) - offset) r^(n-1) S_n(eta*r)."""
    P = len(eta)
    offset = np.zeros(P) if offset is None else offset
    length = upper - lower
    value, error = np.zeros(P), np.zeros(P)
    deriv = np.zeros(P) if derivative else None

    counts = panel_counts(length, eta, alpha, upper, cfg)
    pending = np.arange(P)
    for refinement in range(REFINEMENTS + 1):
        failed = []
        for N in np.unique(counts[pending]):
            idx = pending[counts[pending] == N]
            step = max(1, MAX_NODES // (int(N) * 24))
            for start in range(0, len(idx), step):
                sel = idx[start : start + step]
                args = (n, eta[sel], alpha[sel], offset[sel], lower[sel], length[sel], int(N))
                v16, d16 = _panel_rule(*args, GL16, derivative)
                v8, __ = _panel_rule(*args, GL8, False)
                value[sel] = v16
                error[sel] = np.abs(v16 - v8)
                if derivative:
                    deriv[sel] = d16
                bad = error[sel] > cfg.quad_tol * np.maximum(1.0, np.abs(v16))
                failed.append(sel[bad & (counts[sel] < cfg.max_panels)])
        pending = np.concatenate(failed) if failed else np.array([], dtype=int)
        if len(pending) == 0 or refinement == REFINEMENTS:
            break
        logger.debug("Refining radial panels for %d point(s)", len(pending))
        counts[pending] = np.minimum(2 * counts[pending], cfg.max_panels)

    unconverged = error > cfg.quad_tol * np.maximum(1.0, np.abs(value))
    if np.any(unconverged):
        worst = float(np.max(error[unconverged]))
        what = f"Radial integral at {int(np.sum(unconverged))} point(s)"
        raise QuadratureConvergenceError(worst, cfg.quad_tol, what)
    return value, deriv, error


def ball_integrals(
    n: int, eta: np.ndarray, alpha: np.ndarray, cfg: KernelConfig, derivative: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Integrals over r in [0, 1].

    Returns (value, deriv, error, log_shift); the true integrals are
    exp(log_shift) times value and deriv."""
    cut = np.log(1 / cfg.exterior_cutoff_eps) + np.log1p(2 * np.abs(alpha))
    pos = alpha > 0
    neg = alpha < 0
    lower = np.zeros_like(alpha)
    upper = np.ones_like(alpha)
    lower[pos] = np.sqrt(np.maximum(0.0, 1 - cut[pos] / alpha[pos]))
    upper[neg] = np.minimum(1.0, np.sqrt(cut[neg] / -alpha[neg]))
    # exp(alpha*(r²-1)) peaks at r=0 for alpha<0; factor out exp(-alpha)
    shift = np.where(neg, -alpha, 0.0)
    value, deriv, error = radial_integrals(n, eta, alpha, lower, upper, cfg, derivative, shift)
    return value, deriv, error, shift


def shell_upper(alpha: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    """r_max where exp(alpha*(r²-1)) drops below exterior_cutoff_eps"""
    return np.sqrt(1 + np.log(1 / cfg.exterior_cutoff_eps) / -alpha)


def shell_fits(eta: np.ndarray, alpha: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    """Whether the truncated shell [1, r_max] resolves within max_panels; r_max grows without bound as alpha -> 0-"""
    upper = shell_upper(alpha, cfg)
    return uncapped_panel_counts(upper - 1, eta, alpha, upper) <= cfg.max_panels


def shell_integrals(
    n: int, eta: np.ndarray, alpha: np.ndarray, cfg: KernelConfig, derivative: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Integrals over r in [1, r_max] for alpha < 0, truncated where the weight drops below the cutoff"""
    if np.any(alpha >= 0):
        raise ValueError("The exterior integral needs alpha < 0")
    lower = np.ones_like(alpha)
    upper = shell_upper(alpha, cfg)
    return radial_integrals(n, eta, alpha, lower, upper, cfg, derivative)
