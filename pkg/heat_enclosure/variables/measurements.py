from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import xarray as xr


@dataclass(frozen=True)
class MeasurementSet:
    """Quadrature-sampled lateral Cauchy data and initial data.

    Gamma samples carry the outward normal, u, the flux du/dnu, the Robin
    coefficient rho and the quadrature weight; h0 = flux + rho*u.
    """

    gamma_x: np.ndarray
    gamma_t: np.ndarray
    normal: np.ndarray
    u: np.ndarray
    flux: np.ndarray
    rho: np.ndarray
    weight: np.ndarray
    initial_x: np.ndarray
    initial_u: np.ndarray
    initial_weight: np.ndarray

    def __post_init__(self):
        for name in ["gamma_t", "u", "flux", "rho", "weight", "initial_u", "initial_weight"]:
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name in ["gamma_x", "normal", "initial_x"]:
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=float)))

        N = len(self.gamma_t)
        for name in ["u", "flux", "rho", "weight"]:
            if len(getattr(self, name)) != N:
                raise ValueError(f"'{name}' has {len(getattr(self, name))} samples, expected {N}")
        if self.gamma_x.shape != self.normal.shape or len(self.gamma_x) != N:
            raise ValueError("Boundary points and normals must both have shape (N, n)")
        if len(self.initial_u) != len(self.initial_x) or len(self.initial_weight) != len(self.initial_x):
            raise ValueError("Initial samples, values and weights must have equal length")
        if np.any(self.weight <= 0) or np.any(self.initial_weight <= 0):
            raise ValueError("Quadrature weights must be positive")

    @property
    def n(self) -> int:
        return self.gamma_x.shape[1]

    @property
    def h0(self) -> np.ndarray:
        return self.flux + self.rho * self.u

    def ds(self) -> xr.Dataset:
        """The samples as an xarray Dataset with dimensions 'gamma' and 'initial'"""
        n = self.n
        names = ["x", "y", "z"][:n]
        data_vars = {
            "u": ("gamma", self.u),
            "flux": ("gamma", self.flux),
            "rho": ("gamma", self.rho),
            "h0": ("gamma", self.h0),
            "weight": ("gamma", self.weight),
            "t": ("gamma", self.gamma_t),
            "initial_u": ("initial", self.initial_u),
            "initial_weight": ("initial", self.initial_weight),
        }
        for k, name in enumerate(names):
            data_vars[name] = ("gamma", self.gamma_x[:, k])
            data_vars[f"nu_{name}"] = ("gamma", self.normal[:, k])
            data_vars[f"initial_{name}"] = ("initial", self.initial_x[:, k])
        return xr.Dataset(data_vars)

    def _check_same_nodes(self, other: MeasurementSet) -> None:
        same = (
            np.array_equal(self.gamma_x, other.gamma_x)
            and np.array_equal(self.gamma_t, other.gamma_t)
            and np.array_equal(self.initial_x, other.initial_x)
        )
        if not same:
            raise ValueError("Measurement sets are sampled on different nodes")

    def combine(self, other: MeasurementSet, alpha: float, beta: float) -> MeasurementSet:
        """alpha*self + beta*other on identical nodes"""
        self._check_same_nodes(other)
        return replace(
            self,
            u=alpha * self.u + beta * other.u,
            flux=alpha * self.flux + beta * other.flux,
            initial_u=alpha * self.initial_u + beta * other.initial_u,
        )

    def zero_gamma(self) -> MeasurementSet:
        """Drops the lateral data, keeping only the initial data"""
        return replace(self, u=np.zeros_like(self.u), flux=np.zeros_like(self.flux))
