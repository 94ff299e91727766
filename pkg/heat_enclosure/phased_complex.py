"""Complex numbers stored as (log-magnitude, argument).

Factors like exp(±tau*margin) are carried in the log-magnitude and are only
exponentiated after a common maximum has been factored out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[float, complex, np.ndarray]


def wrap_angle(arg: ArrayLike) -> np.ndarray:
    """Maps angles to (-pi, pi]"""
    return np.pi - np.mod(np.pi - np.asarray(arg, dtype=float), 2 * np.pi)


def pairwise_sum(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Tree summation along an axis.

    The pairing only depends on the length of the axis, so the result is
    independent of how the values were produced."""
    values = np.moveaxis(np.asarray(values), axis, -1)
    if values.shape[-1] == 0:
        return np.zeros(values.shape[:-1], dtype=values.dtype)
    while values.shape[-1] > 1:
        if values.shape[-1] % 2:
            pad = np.zeros(values.shape[:-1] + (1,), dtype=values.dtype)
            values = np.concatenate([values, pad], axis=-1)
        values = values[..., 0::2] + values[..., 1::2]
    return values[..., 0]


@dataclass(frozen=True)
class PhasedComplex:
    log_mag: np.ndarray
    arg: np.ndarray

    def __post_init__(self):
        log_mag = np.asarray(self.log_mag, dtype=float)
        arg = np.broadcast_to(wrap_angle(self.arg), log_mag.shape)
        # Zero state has no meaningful angle
        arg = np.where(np.isneginf(log_mag), 0.0, arg)
        object.__setattr__(self, "log_mag", log_mag)
        object.__setattr__(self, "arg", arg)

    @classmethod
    def zeros(cls, shape: tuple[int] = ()) -> PhasedComplex:
        return cls(np.full(shape, -np.inf), np.zeros(shape))

    @classmethod
    def from_complex(cls, value: ArrayLike) -> PhasedComplex:
        value = np.asarray(value, dtype=complex)
        mag = np.abs(value)
        with np.errstate(divide="ignore"):
            log_mag = np.log(mag)
        return cls(log_mag, np.where(mag > 0, np.angle(value), 0.0))

    @classmethod
    def from_exponent(
        cls, exponent: ArrayLike, factor: ArrayLike = 1.0
    ) -> PhasedComplex:
        """factor * exp(exponent) without forming exp(exponent)"""
        exponent = np.asarray(exponent, dtype=complex)
        f = cls.from_complex(factor)
        return cls(exponent.real + f.log_mag, exponent.imag + f.arg)

    @classmethod
    def from_scaled(cls, log_scale: ArrayLike, mantissa: ArrayLike) -> PhasedComplex:
        """mantissa * exp(log_scale) for a real log-scale"""
        m = cls.from_complex(mantissa)
        return cls(m.log_mag + np.asarray(log_scale, dtype=float), m.arg)

    @property
    def shape(self) -> tuple[int]:
        return self.log_mag.shape

    def is_zero(self) -> np.ndarray:
        return np.isneginf(self.log_mag)

    def __getitem__(self, key) -> PhasedComplex:
        return PhasedComplex(self.log_mag[key], self.arg[key])

    def _coerce(self, other) -> PhasedComplex:
        if isinstance(other, PhasedComplex):
            return other
        return PhasedComplex.from_complex(other)

    def __mul__(self, other) -> PhasedComplex:
        other = self._coerce(other)
        return PhasedComplex(self.log_mag + other.log_mag, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PhasedComplex:
        other = self._coerce(other)
        if np.any(other.is_zero()):
            raise ZeroDivisionError("Division by a zero PhasedComplex")
        return PhasedComplex(self.log_mag - other.log_mag, self.arg - other.arg)

    def __neg__(self) -> PhasedComplex:
        return PhasedComplex(self.log_mag, self.arg + np.pi)

    def conj(self) -> PhasedComplex:
        return PhasedComplex(self.log_mag, -self.arg)

    def scale_exp(self, exponent: ArrayLike) -> PhasedComplex:
        """Multiplies by exp(exponent)"""
        return self * PhasedComplex.from_exponent(exponent)

    def __add__(self, other) -> PhasedComplex:
        other = self._coerce(other)
        m = np.maximum(self.log_mag, other.log_mag)
        m = np.where(np.isneginf(m), 0.0, m)
        s = np.exp(self.log_mag - m) * np.exp(1j * self.arg) + np.exp(
            other.log_mag - m
        ) * np.exp(1j * other.arg)
        return PhasedComplex.from_scaled(m, s)

    __radd__ = __add__

    def __sub__(self, other) -> PhasedComplex:
        return self + (-self._coerce(other))

    def total(self, axis: int = None) -> PhasedComplex:
        """Pairwise sum over an axis (all entries if axis is None)"""
        log_mag, arg = self.log_mag, self.arg
        if axis is None:
            log_mag, arg, axis = log_mag.ravel(), arg.ravel(), 0
        if log_mag.shape[axis] == 0:
            return PhasedComplex.zeros(np.zeros(log_mag.shape).sum(axis=axis).shape)
        m = np.max(log_mag, axis=axis, keepdims=True)
        m = np.where(np.isneginf(m), 0.0, m)
        terms = np.exp(log_mag - m) * np.exp(1j * arg)
        s = pairwise_sum(terms, axis=axis)
        return PhasedComplex.from_scaled(np.squeeze(m, axis=axis), s)

    def to_complex(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            value = np.exp(self.log_mag) * np.exp(1j * self.arg)
        if value.ndim == 0:
            return complex(value)
        return value

    def __repr__(self) -> str:
        return f"PhasedComplex(log_mag={self.log_mag}, arg={self.arg})"
