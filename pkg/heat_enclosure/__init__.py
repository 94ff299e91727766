from .space_time import SpaceTimePoint, make_probe, make_z
from .variables import BoundaryPiece, Box, KernelConfig, ScenarioGeometry
from .caloric import analytic_solution, extract_traces, solve_forward
from .reconstruct import carleman_estimate, enclosure_estimate, tau_sweep
from .config import ExperimentConfig, load_config
