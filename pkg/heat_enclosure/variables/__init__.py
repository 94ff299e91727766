from .kernel import KernelConfig, KernelValue
from .geometry import Box, BoundaryPiece, ScenarioGeometry, face_axis
from .cone import ConeRegion, VisibilityConstant
from .measurements import MeasurementSet
from .results import (
    ConfigMargins,
    ReconstructionEstimate,
    SweepRow,
    SweepReport,
    VisibilityFit,
)
