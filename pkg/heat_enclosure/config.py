"""Experiment configurations.

Experiments are JSON documents. Any key can be overridden with a dotted key
path, e.g. 'probe.c=2' or 'taus=[4, 8, 12]'; values are parsed as JSON and
fall back to plain strings.
"""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .errors import ConfigError
from .space_time import ProbeDirection, SpaceTimePoint, make_probe
from .variables import BoundaryPiece, Box, KernelConfig, ScenarioGeometry

logger = logging.getLogger(__name__)

EXAMPLE_CONFIGS = Path(__file__).parent / "example_configs"
METHODS = ("carleman", "enclosure")
CONSTANT_MODES = ("analytic", "calibrated", "finite_tau")


def bundled_configs() -> list[str]:
    return sorted(p.stem for p in EXAMPLE_CONFIGS.glob("*.json"))


def set_key(raw: dict, key: str, value: Any) -> None:
    """Sets a dotted key path, creating intermediate tables"""
    *parents, last = key.split(".")
    node = raw
    for part in parents:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(key, f"'{part}' is not a table")
        node = child
    node[last] = value


def parse_override(override: str) -> tuple[str, Any]:
    if "=" not in override:
        raise ConfigError(override, "overrides must look like key.path=value")
    key, text = override.split("=", 1)
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return key.strip(), value


def _get(raw: dict, key: str, default: Any = ...) -> Any:
    node = raw
    for part in key.split("."):
        if not isinstance(node, dict) or part not in node:
            if default is ...:
                raise ConfigError(key, "is required")
            return default
        node = node[part]
    return node


def _floats(raw: dict, key: str, default: Any = ...) -> Optional[np.ndarray]:
    value = _get(raw, key, default)
    if value is None:
        return None
    try:
        return np.atleast_1d(np.asarray(value, dtype=float))
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected numbers, got {value!r}")


def _float(raw: dict, key: str, default: Any = ...) -> Optional[float]:
    value = _get(raw, key, default)
    if value is None:
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected a number, got {value!r}")


def _target(raw: dict, key: str) -> SpaceTimePoint:
    return SpaceTimePoint(_floats(raw, f"{key}.x"), _float(raw, f"{key}.t"))


def _geometry(raw: dict) -> ScenarioGeometry:
    pieces = []
    for k, piece in enumerate(_get(raw, "geometry.gamma")):
        key = f"geometry.gamma.{k}"
        if not isinstance(piece, dict) or "face" not in piece:
            raise ConfigError(key, "needs a 'face'")
        window = piece.get("window", [0.0, _float(raw, "geometry.T")])
        pieces.append(BoundaryPiece(piece["face"], tuple(window), piece.get("span")))
    return ScenarioGeometry(
        domain=Box(_floats(raw, "geometry.domain.lower"), _floats(raw, "geometry.domain.upper")),
        T=_float(raw, "geometry.T"),
        gamma=pieces,
        U=Box(_floats(raw, "geometry.U.lower"), _floats(raw, "geometry.U.upper")),
        target=_target(raw, "geometry.target"),
    )


def _probe(raw: dict) -> ProbeDirection:
    try:
        return make_probe(_float(raw, "probe.c"), _floats(raw, "probe.omega"), _floats(raw, "probe.omega_perp", None))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError("probe", str(e))


def _kernel(raw: dict) -> KernelConfig:
    table = _get(raw, "kernel", {})
    known = {f.name for f in fields(KernelConfig)}
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"kernel.{sorted(unknown)[0]}", f"unknown kernel option (use {sorted(known)})")
    return KernelConfig(**table)


@dataclass
class ExperimentConfig:
    name: str
    raw: dict
    geometry: Optional[ScenarioGeometry]
    probe: Optional[ProbeDirection]
    field_kind: Optional[str]
    field_params: dict
    solver_grid: Optional[tuple[int, int]]
    method: str
    cone: Optional[dict]
    constant_mode: str
    constant_taus: Optional[list[float]]
    taus: list[float]
    rho: float
    kernel: KernelConfig
    quadrature: dict
    noise: Optional[dict]
    output_directory: Path
    timings: bool
    stop_on_growth: bool
    min_margin: float
    visibility: dict = field(default_factory=dict)
    forward: dict = field(default_factory=dict)

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(name.replace("_", "."), "is required for this command")


def parse_config(raw: dict, name: str = "experiment") -> ExperimentConfig:
    """Builds an ExperimentConfig from a parsed JSON document"""
    method = _get(raw, "method", "carleman")
    if method not in METHODS:
        raise ConfigError("method", f"'{method}' is not one of {METHODS}")
    cone = _get(raw, "cone", None)
    if method == "enclosure" and cone is None:
        raise ConfigError("cone", "the enclosure method needs a 'cone' table")
    constant_mode = _get(raw, "constant.mode", "calibrated")
    if constant_mode not in CONSTANT_MODES:
        raise ConfigError("constant.mode", f"'{constant_mode}' is not one of {CONSTANT_MODES}")

    grid = _get(raw, "field.solver.grid", None)
    taus = _floats(raw, "taus", [])
    noise = _get(raw, "noise", None)
    if noise is not None and "amplitude" not in noise:
        raise ConfigError("noise.amplitude", "is required when noise is given")
    constant_taus = _floats(raw, "constant.taus", None)

    return ExperimentConfig(
        name=_get(raw, "name", name),
        raw=raw,
        geometry=_geometry(raw) if "geometry" in raw else None,
        probe=_probe(raw) if "probe" in raw else None,
        field_kind=_get(raw, "field.kind", None),
        field_params=_get(raw, "field.params", {}),
        solver_grid=None if grid is None else (int(grid[0]), int(grid[1])),
        method=method,
        cone=cone,
        constant_mode=constant_mode,
        constant_taus=None if constant_taus is None else constant_taus.tolist(),
        taus=taus.tolist(),
        rho=_float(raw, "rho", 0.0),
        kernel=_kernel(raw),
        quadrature=_get(raw, "quadrature", {}),
        noise=noise,
        output_directory=Path(_get(raw, "output.directory", ".")),
        timings=bool(_get(raw, "output.timings", False)),
        stop_on_growth=bool(_get(raw, "sweep.stop_on_growth", True)),
        min_margin=_float(raw, "sweep.min_margin", 0.0),
        visibility=_get(raw, "visibility", {}),
        forward=_get(raw, "forward", {}),
    )


def resolve_path(path: Union[str, Path]) -> Path:
    """The path itself if it exists, else a bundled configuration of that name"""
    path = Path(path)
    if path.exists():
        return path
    bundled = EXAMPLE_CONFIGS / f"{path.stem}.json"
    if bundled.exists():
        logger.info("Using bundled configuration '%s'", path.stem)
        return bundled
    raise ConfigError("config", f"'{path}' does not exist and is not one of {bundled_configs()}")


def load_config(path: Union[str, Path], overrides: Optional[list[str]] = None) -> ExperimentConfig:
    path = resolve_path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"'{path}' is not valid JSON ({e})")
    raw = copy.deepcopy(raw)
    for override in overrides or []:
        set_key(raw, *parse_override(override))
    return parse_config(raw, name=path.stem)
