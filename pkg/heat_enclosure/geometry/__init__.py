from .validation import (
    FINAL_TIME,
    HYPOTHESIS_NUMBERS,
    INITIAL_DATA,
    LATERAL_BOUNDARY,
    compute_margins,
    default_delta,
    validate_config,
)
from .cones import (
    analytic_constant,
    build_cone,
    default_aux_points,
    face_normal_constant,
    face_normals,
    fit_cone,
    simplex_constant,
    theta,
    triangle_limit_constant,
)
from .quadrature import (
    CubatureChunk,
    box_rule,
    interval_rule,
    concatenate,
    cone_quadrature,
    enclosure_rule,
    phase_adapted_rule,
    phase_rates,
    simplex_panel_rule,
)
