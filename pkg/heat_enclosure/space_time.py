"""Space-time points, probe directions and the complex frequency z.

The phase exponent x·z - t(z·z) of a probe splits space-time along the
hyperplane (x,t)·omega(c) = const. Its real part is tau*sqrt(1+c²)*(x,t)·omega(c).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import (
    DimensionError,
    FrequencyRangeError,
    ImaginaryPartZeroError,
    MissingPerpendicularError,
    ParallelDirectionsError,
    ProbeVectorError,
)

SUPPORTED_DIMENSIONS = (1, 2, 3)
PARALLEL_TOL = 1e-8


@dataclass(frozen=True)
class SpaceTimePoint:
    x: np.ndarray
    t: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if x.ndim != 1 or len(x) not in SUPPORTED_DIMENSIONS:
            raise DimensionError(x.size)
        if not (np.all(np.isfinite(x)) and np.isfinite(self.t)):
            raise ValueError(f"Space-time point must be finite, got x={x}, t={self.t}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return len(self.x)

    def as_array(self) -> np.ndarray:
        return np.append(self.x, self.t)

    @classmethod
    def from_array(cls, array) -> SpaceTimePoint:
        array = np.asarray(array, dtype=float)
        return cls(array[:-1], array[-1])


PointLike = Union[SpaceTimePoint, tuple[np.ndarray, np.ndarray]]


def as_space_time_arrays(p: PointLike) -> tuple[np.ndarray, np.ndarray]:
    """Returns x with shape (P, n) and t with shape (P,) for a point or a pair of arrays"""
    if isinstance(p, SpaceTimePoint):
        return p.x[None, :], np.array([p.t])
    x, t = p
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        # One-dimensional space given as a flat array of positions
        x = x[:, None] if len(x) == len(t) else x[None, :]
    if x.shape[0] != t.shape[0]:
        raise ValueError(f"Got {x.shape[0]} positions but {t.shape[0]} times!")
    if x.shape[1] not in SUPPORTED_DIMENSIONS:
        raise DimensionError(x.shape[1])
    return x, t


@dataclass(frozen=True)
class ProbeDirection:
    c: float
    omega: np.ndarray
    omega_perp: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.omega)


def _normalize(v: np.ndarray, name: str) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.isfinite(norm):
        raise ProbeVectorError(name)
    return v / norm


def make_probe(c: float, omega, omega_perp=None) -> ProbeDirection:
    """Validates and normalizes a probe direction.

    For n=1 omega is coerced to ±1 and omega_perp is dropped.
    For n>=2 omega_perp is required. Its component along omega is projected
    out before normalizing, so only a parallel omega_perp is rejected."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    n = len(omega)
    if n not in SUPPORTED_DIMENSIONS:
        raise DimensionError(n)
    omega = _normalize(omega, "omega")

    if n == 1:
        return ProbeDirection(c=float(c), omega=np.sign(omega), omega_perp=None)

    if omega_perp is None:
        raise MissingPerpendicularError(n)
    omega_perp = _normalize(
        np.atleast_1d(np.asarray(omega_perp, dtype=float)), "omega_perp"
    )
    if len(omega_perp) != n:
        raise DimensionError(len(omega_perp), n)
    dot = float(omega @ omega_perp)
    projected = omega_perp - dot * omega
    if np.linalg.norm(projected) <= PARALLEL_TOL:
        raise ParallelDirectionsError(dot)
    omega_perp = projected / np.linalg.norm(projected)
    return ProbeDirection(c=float(c), omega=omega, omega_perp=omega_perp)


def omega_c(probe: ProbeDirection) -> np.ndarray:
    """Unit normal (c*omega, -1)/sqrt(1+c²) of the probe hyperplanes"""
    return np.append(probe.c * probe.omega, -1.0) / np.sqrt(1 + probe.c**2)


@dataclass(frozen=True)
class ComplexFrequency:
    z: np.ndarray
    tau: float
    probe: Optional[ProbeDirection] = None
    a: np.ndarray = field(init=False, repr=False)
    b: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        if len(z) not in SUPPORTED_DIMENSIONS:
            raise DimensionError(len(z))
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "a", z.real.copy())
        object.__setattr__(self, "b", z.imag.copy())

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def zz(self) -> complex:
        """Unconjugated z·z"""
        return complex(np.sum(self.z * self.z))

    @property
    def b_norm(self) -> float:
        return float(np.linalg.norm(self.b))


def complex_frequency(z) -> ComplexFrequency:
    """Wraps an arbitrary complex vector; tau is Re(z·z)"""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.linalg.norm(z.imag) == 0.0:
        raise ImaginaryPartZeroError()
    return ComplexFrequency(z=z, tau=float(np.sum(z * z).real))


def make_z(probe: ProbeDirection, tau: float) -> ComplexFrequency:
    if probe.c**2 * tau <= 1:
        raise FrequencyRangeError(probe.c, tau)
    beta = np.sqrt(1 - 1 / (probe.c**2 * tau))
    if probe.n == 1:
        z = probe.c * tau * (1 + 1j * beta) * probe.omega
    else:
        z = probe.c * tau * (probe.omega + 1j * beta * probe.omega_perp)
    return ComplexFrequency(z=z, tau=float(tau), probe=probe)


def phase_exponent(z: ComplexFrequency, p: PointLike) -> Union[complex, np.ndarray]:
    """x·z - t(z·z); a scalar for a SpaceTimePoint, an array for arrays of points"""
    x, t = as_space_time_arrays(p)
    if x.shape[1] != z.n:
        raise DimensionError(x.shape[1], z.n)
    phase = x @ z.z - t * z.zz
    if isinstance(p, SpaceTimePoint):
        return complex(phase[0])
    return phase


def halfspace_margin(
    probe: ProbeDirection, target: SpaceTimePoint, p: PointLike
) -> Union[float, np.ndarray]:
    """(x0,t0)·omega(c) - (x,t)·omega(c); positive on the decaying side"""
    w = omega_c(probe)
    level = target.as_array() @ w
    x, t = as_space_time_arrays(p)
    margin = level - (x @ w[:-1] + t * w[-1])
    if isinstance(p, SpaceTimePoint):
        return float(margin[0])
    return margin
