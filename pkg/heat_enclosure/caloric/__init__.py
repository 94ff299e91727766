from .fields import (
    CaloricField,
    ConstantField,
    ExponentialField,
    GridField,
    HeatKernelField,
    ModeField,
    PolynomialField,
    TimeReversedField,
    analytic_solution,
    backward_solution,
)
from .forward import solve_forward
from .traces import add_noise, extract_traces, piece_rule, suggest_panels
