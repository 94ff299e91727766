from .functional import TestFunctionValues, assemble_I_tau, boundary_functional
from .carleman import CarlemanTestFunction, carleman_estimate
from .enclosure import (
    ConeNodes,
    EnclosureTestFunction,
    enclosure_estimate,
    enclosure_field,
    enclosure_v,
    operative_constant,
)
from .sweep import error_trend, tau_sweep
from .ibp import CarlemanKernelField, ibp_residual
