"""Caloric fields: closed-form solutions of the heat equation and sampled grids.

Every field evaluates u(x, t) and its spatial gradient at arrays of points,
x with shape (P, n) and t with shape (P,). A flat x is read as n=1 positions.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
import xarray as xr

from ..decorators import FIELD_KINDS, add_field_kind
from ..errors import DimensionError, FieldParameterError

logger = logging.getLogger(__name__)

GRID_HEADER = "# heat-enclosure grid field"


class CaloricField:
    kind = "abstract"

    def __init__(self, n: int = 1):
        if n not in (1, 2, 3):
            raise DimensionError(n)
        self.n = n

    def _points(self, x, t) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or (x.ndim == 1 and self.n == 1):
            x = np.atleast_1d(x)[:, None]
        x = np.atleast_2d(x)
        if x.shape[1] != self.n:
            raise DimensionError(x.shape[1], self.n)
        t = np.broadcast_to(np.asarray(t, dtype=float), (len(x),))
        return x, t

    def value(self, x, t) -> np.ndarray:
        x, t = self._points(x, t)
        return self._value(x, t)

    def gradient(self, x, t) -> np.ndarray:
        """Spatial gradient with shape (P, n)"""
        x, t = self._points(x, t)
        return self._gradient(x, t)

    def normal_derivative(self, x, t, normal: np.ndarray) -> np.ndarray:
        return np.sum(self.gradient(x, t) * np.atleast_2d(normal), axis=1)

    def residual(self, x, t, backward: bool = False, h: float = 1e-4) -> np.ndarray:
        """Central-difference estimate of u_t - Δu (u_t + Δu if backward)"""
        x, t = self._points(x, t)
        u_t = (self._value(x, t + h) - self._value(x, t - h)) / (2 * h)
        lap = np.zeros(len(x))
        u0 = self._value(x, t)
        for k in range(self.n):
            step = np.zeros(self.n)
            step[k] = h
            lap += (self._value(x + step, t) - 2 * u0 + self._value(x - step, t)) / h**2
        return u_t + lap if backward else u_t - lap

    def _value(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _gradient(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x, t) -> np.ndarray:
        return self.value(x, t)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(kind={self.kind}, n={self.n})"


def _vector(params: dict, name: str, kind: str, n: Optional[int]) -> np.ndarray:
    if name not in params:
        raise FieldParameterError(kind, f"'{name}' is required")
    v = np.atleast_1d(np.asarray(params[name], dtype=float))
    if n is not None and len(v) != n:
        raise FieldParameterError(kind, f"'{name}' has {len(v)} components for n={n}")
    if not np.all(np.isfinite(v)):
        raise FieldParameterError(kind, f"'{name}' must be finite")
    return v


@add_field_kind("constant")
class ConstantField(CaloricField):
    def __init__(self, n: int = 1, value: float = 1.0):
        super().__init__(n)
        self.constant = float(value)

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> ConstantField:
        return cls(n=n or 1, value=params.get("value", 1.0))

    def _value(self, x, t):
        return np.full(len(x), self.constant)

    def _gradient(self, x, t):
        return np.zeros_like(x)


@add_field_kind("exponential")
class ExponentialField(CaloricField):
    """u = A exp(a·x + |a|²t)"""

    def __init__(self, drift, amplitude: float = 1.0):
        drift = np.atleast_1d(np.asarray(drift, dtype=float))
        super().__init__(len(drift))
        self.drift = drift
        self.amplitude = float(amplitude)

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> ExponentialField:
        return cls(_vector(params, "drift", cls.kind, n), params.get("amplitude", 1.0))

    def _value(self, x, t):
        return self.amplitude * np.exp(x @ self.drift + t * (self.drift @ self.drift))

    def _gradient(self, x, t):
        return self._value(x, t)[:, None] * self.drift[None, :]


@add_field_kind("heat_kernel")
class HeatKernelField(CaloricField):
    """Gaussian heat kernel with its source at (x_s, t_s), t_s < 0"""

    def __init__(self, source_x, source_t: float, amplitude: float = 1.0):
        source_x = np.atleast_1d(np.asarray(source_x, dtype=float))
        super().__init__(len(source_x))
        if not source_t < 0:
            raise FieldParameterError(self.kind, f"source time must be negative, got t_s={source_t}")
        self.source_x = source_x
        self.source_t = float(source_t)
        self.amplitude = float(amplitude)

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> HeatKernelField:
        if "source_t" not in params:
            raise FieldParameterError(cls.kind, "'source_t' is required")
        return cls(
            _vector(params, "source_x", cls.kind, n),
            params["source_t"],
            params.get("amplitude", 1.0),
        )

    def _value(self, x, t):
        s = t - self.source_t
        r2 = np.sum((x - self.source_x) ** 2, axis=1)
        return self.amplitude * (4 * np.pi * s) ** (-self.n / 2) * np.exp(-r2 / (4 * s))

    def _gradient(self, x, t):
        s = t - self.source_t
        return -(x - self.source_x) / (2 * s[:, None]) * self._value(x, t)[:, None]


@add_field_kind("polynomial")
class PolynomialField(CaloricField):
    """u = A (|x|² + 2n t)"""

    def __init__(self, n: int = 1, amplitude: float = 1.0):
        super().__init__(n)
        self.amplitude = float(amplitude)

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> PolynomialField:
        return cls(n=params.get("n", n or 1), amplitude=params.get("amplitude", 1.0))

    def _value(self, x, t):
        return self.amplitude * (np.sum(x**2, axis=1) + 2 * self.n * t)

    def _gradient(self, x, t):
        return 2 * self.amplitude * x


@add_field_kind("mode")
class ModeField(CaloricField):
    """u = A exp(-|k|²t) sin(k·x + phase)"""

    def __init__(self, wavevector, phase: float = 0.0, amplitude: float = 1.0):
        wavevector = np.atleast_1d(np.asarray(wavevector, dtype=float))
        super().__init__(len(wavevector))
        self.wavevector = wavevector
        self.phase = float(phase)
        self.amplitude = float(amplitude)

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> ModeField:
        return cls(
            _vector(params, "wavevector", cls.kind, n),
            params.get("phase", 0.0),
            params.get("amplitude", 1.0),
        )

    def _decay(self, t):
        return self.amplitude * np.exp(-(self.wavevector @ self.wavevector) * t)

    def _value(self, x, t):
        return self._decay(t) * np.sin(x @ self.wavevector + self.phase)

    def _gradient(self, x, t):
        cos = self._decay(t) * np.cos(x @ self.wavevector + self.phase)
        return cos[:, None] * self.wavevector[None, :]


@add_field_kind("grid")
class GridField(CaloricField):
    """Field sampled on a regular (t, x) grid, n=1.

    Values are interpolated bilinearly; the boundary flux uses fourth-order
    one-sided differences in x."""

    def __init__(self, data: xr.DataArray):
        super().__init__(1)
        if set(data.dims) != {"t", "x"}:
            raise FieldParameterError(self.kind, f"grid needs dimensions ('t', 'x'), got {data.dims}")
        if data.sizes["x"] < 5:
            raise FieldParameterError(self.kind, "grid needs at least 5 points in x")
        self.data = data.transpose("t", "x")

    @classmethod
    def from_params(cls, params: dict, n: Optional[int] = None) -> GridField:
        if "path" not in params:
            raise FieldParameterError(cls.kind, "'path' is required")
        return cls.from_csv(params["path"])

    @property
    def x(self) -> np.ndarray:
        return self.data.x.values

    @property
    def t(self) -> np.ndarray:
        return self.data.t.values

    def _interp(self, data: xr.DataArray, x, t) -> np.ndarray:
        return data.interp(
            x=xr.DataArray(x[:, 0], dims="p"),
            t=xr.DataArray(t, dims="p"),
            method="linear",
        ).values

    def _value(self, x, t):
        return self._interp(self.data, x, t)

    def _gradient(self, x, t):
        return self._interp(self.data.differentiate("x", edge_order=2), x, t)[:, None]

    def boundary_flux(self, face: str, t) -> np.ndarray:
        """Outward normal derivative on 'x_lo' or 'x_hi' at times t"""
        u = self.data.values
        h = self.x[1] - self.x[0]
        stencil = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * h)
        if face == "x_lo":
            flux = -(u[:, :5] @ stencil)
        elif face == "x_hi":
            flux = -(u[:, ::-1][:, :5] @ stencil)
        else:
            raise FieldParameterError(self.kind, f"no boundary flux on face '{face}'")
        return np.interp(np.asarray(t, dtype=float), self.t, flux)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Header line (Nx, Nt, bounds) followed by row-major values, one time level per row"""
        x, t = self.x, self.t
        header = (
            f"{GRID_HEADER} Nx={len(x) - 1} Nt={len(t) - 1} "
            f"x_lo={float(x[0])!r} x_hi={float(x[-1])!r} t_lo={float(t[0])!r} t_hi={float(t[-1])!r}\n"
        )
        df = pd.DataFrame(self.data.values)
        with open(path, "w") as f:
            f.write(header)
            df.to_csv(f, header=False, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> GridField:
        with open(path) as f:
            header = f.readline()
        if not header.startswith(GRID_HEADER):
            raise FieldParameterError(cls.kind, f"'{path}' has no grid header")
        meta = dict(item.split("=") for item in header[len(GRID_HEADER) :].split())
        values = pd.read_csv(path, skiprows=1, header=None).to_numpy(dtype=float)
        x = np.linspace(float(meta["x_lo"]), float(meta["x_hi"]), int(meta["Nx"]) + 1)
        t = np.linspace(float(meta["t_lo"]), float(meta["t_hi"]), int(meta["Nt"]) + 1)
        if values.shape != (len(t), len(x)):
            raise FieldParameterError(cls.kind, f"'{path}' holds {values.shape} values, header says {(len(t), len(x))}")
        return cls(xr.DataArray(values, dims=("t", "x"), coords={"t": t, "x": x}, name="u"))


class TimeReversedField(CaloricField):
    """v(x, t) = u(x, -t): a backward-caloric field, v_t + Δv = 0"""

    def __init__(self, field: CaloricField):
        super().__init__(field.n)
        self.field = field
        self.kind = f"backward_{field.kind}"

    def _value(self, x, t):
        return self.field._value(x, -t)

    def _gradient(self, x, t):
        return self.field._gradient(x, -t)


def _dimension(params: dict) -> Optional[int]:
    for name in ["drift", "source_x", "wavevector"]:
        if name in params:
            return len(np.atleast_1d(params[name]))
    return params.get("n")


def analytic_solution(kind: str, params: Optional[dict] = None, n: Optional[int] = None) -> CaloricField:
    """A registered caloric field built from its parameters"""
    params = params or {}
    if kind not in FIELD_KINDS:
        raise FieldParameterError(kind, f"unknown kind (choose from {sorted(FIELD_KINDS)})")
    n = n or _dimension(params)
    field = FIELD_KINDS[kind].from_params(params, n)
    logger.debug("Built %s", field)
    return field


def backward_solution(kind: str, params: Optional[dict] = None, n: Optional[int] = None) -> CaloricField:
    """The time reflection of analytic_solution(kind, params).

    A heat_kernel source time t_s becomes a sink at time -t_s."""
    return TimeReversedField(analytic_solution(kind, params, n))
