from typing import Optional, Union

import numpy as np


class DimensionError(ValueError):
    def __init__(self, n: int, expected: Optional[Union[int, tuple[int]]] = None):
        if expected is None:
            super().__init__(
                f"Only spatial dimensions 1, 2 and 3 are supported, got n={n}!"
            )
        else:
            super().__init__(f"Expected spatial dimension {expected}, got n={n}!")


class ProbeVectorError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"Vector '{name}' has zero length and can not be normalized!")


class MissingPerpendicularError(ValueError):
    def __init__(self, n: int):
        super().__init__(f"'omega_perp' is required for n={n} but was not given!")


class ParallelDirectionsError(ValueError):
    def __init__(self, dot: float):
        super().__init__(
            f"'omega_perp' is parallel to 'omega' (omega·omega_perp={dot:.3g})!"
        )


class FrequencyRangeError(ValueError):
    def __init__(self, c: float, tau: float):
        super().__init__(
            f"The probe needs c²τ > 1, but c={c}, tau={tau} gives c²τ={c**2*tau:.6g}!"
        )


class ImaginaryPartZeroError(ValueError):
    def __init__(self):
        super().__init__("The kernels are only defined for Im z != 0!")


class KernelSingularityError(ValueError):
    def __init__(self, distance: float = 0.0):
        super().__init__(
            f"Kernel evaluated at (or within {distance:.3g} of) its singular point (x,t)=(0,0)!"
        )


class KernelConfigError(ValueError):
    def __init__(self, field: str, value):
        super().__init__(f"Invalid kernel configuration: {field}={value}!")


class GeometryError(ValueError):
    def __init__(self, reason: str):
        super().__init__(f"Invalid scenario geometry: {reason}!")


class GammaOutsideBoundaryError(ValueError):
    def __init__(self, face: str, reason: str):
        super().__init__(f"Accessible boundary piece on face '{face}' {reason}!")


class ConfigurationRejectedError(ValueError):
    def __init__(self, condition: str, set_name: str, margin: float, hypothesis: int):
        self.condition = condition
        self.set_name = set_name
        self.margin = margin
        self.hypothesis = hypothesis
        super().__init__(
            f"Configuration rejected by hypothesis {hypothesis} ({condition}): "
            f"the probe does not decay on {set_name} (margin {margin:.6g} <= 0)!"
        )


class ConeOrientationError(ValueError):
    def __init__(self, det: float):
        super().__init__(
            f"Auxiliary points are not positively oriented with omega (det={det:.3g})!"
        )


class ConePlaneError(ValueError):
    def __init__(self, index: int, offset: float):
        super().__init__(
            f"Auxiliary point {index} is off the cone base plane by {offset:.3g}!"
        )


class ConeDegenerateError(ValueError):
    def __init__(self, reason: str = "zero volume"):
        super().__init__(f"Degenerate cone: {reason}!")


class ConeProximityError(ValueError):
    def __init__(self, count: int):
        super().__init__(
            f"{count} evaluation point(s) lie in the closure of the cone (convolution is singular there)!"
        )


class QuadratureConvergenceError(RuntimeError):
    def __init__(self, error: float, tolerance: float, what: str = "quadrature"):
        super().__init__(
            f"{what} did not converge: error estimate {error:.3g} exceeds {tolerance:.3g}!"
        )


class FieldParameterError(ValueError):
    def __init__(self, kind: str, reason: str):
        super().__init__(f"Invalid parameters for field kind '{kind}': {reason}!")


class SolverInputError(ValueError):
    def __init__(self, reason: str):
        super().__init__(f"Forward solver input rejected: {reason}!")


class SweepError(ValueError):
    def __init__(self, taus):
        super().__init__(
            f"A tau sweep needs at least 3 strictly increasing values, got {list(np.atleast_1d(taus))}!"
        )


class ConfigError(ValueError):
    def __init__(self, key: str, reason: str):
        self.key = key
        super().__init__(f"Invalid configuration at '{key}': {reason}!")
