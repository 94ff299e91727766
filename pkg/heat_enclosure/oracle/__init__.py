from .reference import reference_quadrature
from .visibility import (
    calibration_report,
    finite_tau_constant,
    moment,
    unit_density,
    visibility_limit_numeric,
)
