"""Crank-Nicolson solver for the 1D heat equation with Robin conditions.

The Robin law du/dnu + rho*u = h0 is imposed on both ends through ghost
points, which keeps the scheme second order in space up to the boundary.
"""

import logging
from typing import Callable, Union

import numpy as np
import xarray as xr
from scipy.linalg import solve_banded

from ..errors import SolverInputError
from ..variables import ScenarioGeometry
from .fields import GridField

logger = logging.getLogger(__name__)

MIN_STEPS = 8

BoundaryData = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _as_function(f: Union[float, Callable]) -> Callable:
    if callable(f):
        return f
    value = float(f)
    return lambda x, t=None: np.full(np.shape(x), value)


def _laplacian_bands(N: int, h: float, rho_lo: float, rho_hi: float) -> np.ndarray:
    """Ghost-point Laplacian in (1, 1) banded storage, (N+1) unknowns"""
    bands = np.zeros((3, N + 1))
    bands[0, 1:] = 1 / h**2
    bands[1, :] = -2 / h**2
    bands[2, :-1] = 1 / h**2
    bands[0, 1] = 2 / h**2
    bands[2, N - 1] = 2 / h**2
    bands[1, 0] = (-2 - 2 * h * rho_lo) / h**2
    bands[1, N] = (-2 - 2 * h * rho_hi) / h**2
    return bands


def _apply(bands: np.ndarray, u: np.ndarray) -> np.ndarray:
    out = bands[1] * u
    out[:-1] += bands[0, 1:] * u[1:]
    out[1:] += bands[2, :-1] * u[:-1]
    return out


def solve_forward(
    geom: ScenarioGeometry,
    initial: Union[float, Callable],
    h0: Union[float, BoundaryData],
    rho: Union[float, Callable] = 0.0,
    grid: tuple[int, int] = (64, 256),
) -> GridField:
    """Solves u_t = u_xx on the domain of geom over (0, T).

    initial(x) gives u(x, 0); h0(x, t) the Robin data at the boundary
    position x, and rho(x) the Robin coefficient there."""
    if geom.n != 1:
        raise SolverInputError(f"only n=1 is supported, got n={geom.n}")
    Nx, Nt = (int(v) for v in grid)
    if Nx < MIN_STEPS or Nt < MIN_STEPS:
        raise SolverInputError(f"grid {grid} needs at least {MIN_STEPS} steps in x and t")

    initial, h0, rho = _as_function(initial), _as_function(h0), _as_function(rho)
    x_lo, x_hi = geom.domain.lower[0], geom.domain.upper[0]
    x = np.linspace(x_lo, x_hi, Nx + 1)
    t = np.linspace(0.0, geom.T, Nt + 1)
    h, dt = x[1] - x[0], t[1] - t[0]

    u = np.asarray(initial(x), dtype=float) * np.ones(Nx + 1)
    rho_lo, rho_hi = (float(np.asarray(rho(np.array([v]))).ravel()[0]) for v in (x_lo, x_hi))
    g_lo = np.asarray(h0(np.full(Nt + 1, x_lo), t), dtype=float) * np.ones(Nt + 1)
    g_hi = np.asarray(h0(np.full(Nt + 1, x_hi), t), dtype=float) * np.ones(Nt + 1)
    for name, values in [("initial", u), ("h0", np.append(g_lo, g_hi)), ("rho", [rho_lo, rho_hi])]:
        if not np.all(np.isfinite(values)):
            raise SolverInputError(f"'{name}' has non-finite values")

    L = _laplacian_bands(Nx, h, rho_lo, rho_hi)
    lhs = -0.5 * dt * L
    lhs[1] += 1.0

    def source(k: int) -> np.ndarray:
        g = np.zeros(Nx + 1)
        g[0] = 2 * g_lo[k] / h
        g[-1] = 2 * g_hi[k] / h
        return g

    values = np.empty((Nt + 1, Nx + 1))
    values[0] = u
    for k in range(Nt):
        rhs = u + 0.5 * dt * (_apply(L, u) + source(k) + source(k + 1))
        u = solve_banded((1, 1), lhs, rhs)
        values[k + 1] = u
    logger.debug("Crank-Nicolson solve on a %d x %d grid", Nx, Nt)

    data = xr.DataArray(values, dims=("t", "x"), coords={"t": t, "x": x}, name="u")
    return GridField(data)
