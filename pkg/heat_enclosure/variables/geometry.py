from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from ..errors import GammaOutsideBoundaryError, GeometryError
from ..space_time import SpaceTimePoint

AXES = ("x", "y")


def face_axis(face: str) -> tuple[int, int]:
    """Axis index and outward sign of a face name like 'x_hi'"""
    try:
        axis_name, side = face.split("_")
        axis = AXES.index(axis_name)
        sign = {"lo": -1, "hi": 1}[side]
    except (ValueError, KeyError):
        raise GammaOutsideBoundaryError(face, "does not name a face (use e.g. 'x_lo', 'y_hi')")
    return axis, sign


@dataclass(frozen=True)
class Box:
    """Open axis-aligned box; an interval for n=1"""

    lower: tuple[float]
    upper: tuple[float]

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lower) != len(upper) or len(lower) not in (1, 2):
            raise GeometryError(f"box bounds {lower}, {upper} are not 1D or 2D")
        if not all(lo < hi for lo, hi in zip(lower, upper)):
            raise GeometryError(f"box {lower}-{upper} is empty")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return len(self.lower)

    def vertices(self) -> np.ndarray:
        return np.array(list(product(*zip(self.lower, self.upper))))

    def contains(self, x: np.ndarray, margin: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.all(
            (x > np.array(self.lower) + margin) & (x < np.array(self.upper) - margin),
            axis=-1,
        )

    def distance_to_boundary(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.min(np.minimum(x - self.lower, np.array(self.upper) - x)))

    def faces(self) -> list[str]:
        return [f"{AXES[k]}_{side}" for k in range(self.n) for side in ("lo", "hi")]

    def face_extent(self, face: str) -> Optional[tuple[float, float]]:
        """Tangential extent of a face (None for n=1)"""
        axis, _ = face_axis(face)
        if axis >= self.n:
            raise GammaOutsideBoundaryError(face, f"is not a face of a {self.n}D domain")
        if self.n == 1:
            return None
        other = 1 - axis
        return self.lower[other], self.upper[other]

    def face_points(self, face: str, s: Optional[np.ndarray], count: int) -> np.ndarray:
        """Points on a face for tangential coordinates s, and the outward normal"""
        axis, sign = face_axis(face)
        x = np.zeros((count, self.n))
        x[:, axis] = self.upper[axis] if sign > 0 else self.lower[axis]
        if self.n == 2:
            x[:, 1 - axis] = s
        return x

    def face_normal(self, face: str) -> np.ndarray:
        axis, sign = face_axis(face)
        normal = np.zeros(self.n)
        normal[axis] = sign
        return normal


@dataclass(frozen=True)
class BoundaryPiece:
    """Part of the lateral boundary: a face, a tangential span (n=2) and a time window"""

    face: str
    window: tuple[float, float]
    span: Optional[tuple[float, float]] = None

    def __post_init__(self):
        face_axis(self.face)
        window = tuple(float(v) for v in self.window)
        if not window[0] < window[1]:
            raise GammaOutsideBoundaryError(self.face, f"has an empty time window {window}")
        object.__setattr__(self, "window", window)
        if self.span is not None:
            span = tuple(float(v) for v in self.span)
            if not span[0] < span[1]:
                raise GammaOutsideBoundaryError(self.face, f"has an empty span {span}")
            object.__setattr__(self, "span", span)

    def tangential_range(self, domain: Box) -> Optional[tuple[float, float]]:
        extent = domain.face_extent(self.face)
        if extent is None:
            return None
        return self.span or extent


@dataclass(frozen=True)
class ScenarioGeometry:
    domain: Box
    T: float
    gamma: tuple[BoundaryPiece]
    U: Box
    target: SpaceTimePoint

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        if not self.T > 0:
            raise GeometryError(f"T must be positive, got {self.T}")
        if self.target.n != self.domain.n or self.U.n != self.domain.n:
            raise GeometryError("domain, U and target must share the spatial dimension")
        if not (self.domain.contains(self.target.x)[0] and 0 < self.target.t < self.T):
            raise GeometryError(f"target {self.target} is not inside the space-time cylinder")
        if not self.gamma:
            raise GeometryError("the accessible boundary is empty")
        for piece in self.gamma:
            self._check_piece(piece)

    @property
    def n(self) -> int:
        return self.domain.n

    def _check_piece(self, piece: BoundaryPiece) -> None:
        extent = self.domain.face_extent(piece.face)
        if piece.window[0] < 0 or piece.window[1] > self.T:
            raise GammaOutsideBoundaryError(piece.face, f"has window {piece.window} outside (0, {self.T})")
        if extent is None:
            if piece.span is not None:
                raise GammaOutsideBoundaryError(piece.face, "has a span but faces are points for n=1")
            return
        span = piece.span or extent
        if span[0] < extent[0] or span[1] > extent[1]:
            raise GammaOutsideBoundaryError(piece.face, f"has span {span} outside the face {extent}")

    def clipped_U(self) -> Box:
        lower = np.maximum(self.U.lower, self.domain.lower)
        upper = np.minimum(self.U.upper, self.domain.upper)
        return Box(tuple(lower), tuple(upper))
