from dataclasses import dataclass

import numpy as np

from ..errors import KernelConfigError
from ..phased_complex import PhasedComplex


@dataclass(frozen=True)
class KernelConfig:
    quad_tol: float = 1e-10
    max_panels: int = 4096
    exterior_cutoff_eps: float = 1e-16
    branch_R: float = 1.0

    def __post_init__(self):
        for name in ["quad_tol", "max_panels", "exterior_cutoff_eps", "branch_R"]:
            if not getattr(self, name) > 0:
                raise KernelConfigError(name, getattr(self, name))
        if not self.exterior_cutoff_eps < self.quad_tol:
            raise KernelConfigError("exterior_cutoff_eps", self.exterior_cutoff_eps)


@dataclass(frozen=True)
class KernelValue:
    value: PhasedComplex
    est_error: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "est_error", np.asarray(self.est_error, dtype=float))
        if np.any(self.est_error < 0):
            raise ValueError("Quadrature error estimates must be non-negative")
