from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Optional

import numpy as np

from ..errors import ConeDegenerateError
from ..space_time import ProbeDirection, SpaceTimePoint


@dataclass(frozen=True)
class ConeRegion:
    """Space-time simplex with its vertex at the target.

    vertices[0] is the target, the remaining rows span the base on the plane
    (x,t)·omega(c) = (x0,t0)·omega(c) - delta (the top vertex excepted)."""

    target: SpaceTimePoint
    probe: ProbeDirection
    delta: float
    vertices: np.ndarray
    aux_points: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.target.n

    def edges(self) -> np.ndarray:
        """Edge vectors from the target vertex as rows"""
        return self.vertices[1:] - self.vertices[0]

    def volume(self) -> float:
        return abs(np.linalg.det(self.edges())) / factorial(self.n + 1)

    def barycentric(self, points: np.ndarray) -> np.ndarray:
        """Coordinates lambda with points = vertex + lambda @ edges"""
        return np.linalg.solve(self.edges().T, (points - self.vertices[0]).T).T

    def closure_contains(self, points: np.ndarray, tol: float = 1e-8) -> np.ndarray:
        lam = self.barycentric(np.atleast_2d(points))
        return np.all(lam >= -tol, axis=1) & (np.sum(lam, axis=1) <= 1 + tol)


@dataclass(frozen=True)
class VisibilityConstant:
    mu: float
    C: complex

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not np.isfinite(self.C) or self.C == 0:
            raise ConeDegenerateError(f"visibility constant C={self.C} is not usable")
        object.__setattr__(self, "C", complex(self.C))
