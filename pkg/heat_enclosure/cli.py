"""Command line entry point: heat-enclosure <command> [options]."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from .caloric import CaloricField, add_noise, analytic_solution, extract_traces, solve_forward, suggest_panels
from .config import ExperimentConfig, bundled_configs, load_config
from .errors import ConfigError, ConfigurationRejectedError
from .geometry import build_cone, compute_margins, default_delta, fit_cone, validate_config
from .kernel import run_kernel_checks
from .managers import DaskManager
from .oracle import calibration_report, visibility_limit_numeric
from .reconstruct import (
    carleman_estimate,
    enclosure_estimate,
    operative_constant,
    tau_sweep,
)
from .reconstruct.enclosure import DEFAULT_CALIBRATION_TAUS
from .space_time import SpaceTimePoint
from .variables import ScenarioGeometry, SweepReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_REJECTED = 2

DEFAULT_GRIDS = [[16, 32], [32, 64], [64, 128]]
VERBOSITY = [logging.WARNING, logging.INFO, logging.DEBUG]


def _output_directory(args: argparse.Namespace, config: Optional[ExperimentConfig] = None) -> Path:
    if args.output is not None:
        directory = Path(args.output)
    elif config is not None:
        directory = config.output_directory
    else:
        directory = Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _robin_data(field: CaloricField, geom: ScenarioGeometry, rho: float) -> Callable:
    """h0(x, t) = du/dnu + rho u at a boundary position x of a 1D domain"""
    middle = 0.5 * (geom.domain.lower[0] + geom.domain.upper[0])

    def h0(x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        normal = np.where(x >= middle, 1.0, -1.0)
        return field.normal_derivative(x, t, normal) + rho * field.value(x, t)

    return h0


def _data_field(config: ExperimentConfig) -> tuple[CaloricField, Optional[CaloricField]]:
    """The field the data are sampled from, and the analytic field (if any) serving as reference"""
    if config.field_kind is None:
        raise ConfigError("field.kind", "is required")
    exact = analytic_solution(config.field_kind, config.field_params, config.geometry.n)
    if config.solver_grid is None:
        return exact, exact
    geom = config.geometry
    solved = solve_forward(
        geom,
        initial=lambda x: exact.value(np.reshape(x, (-1, 1)), np.zeros(np.size(x))),
        h0=_robin_data(exact, geom, config.rho),
        rho=config.rho,
        grid=config.solver_grid,
    )
    logger.info("Data sampled from a forward solve on a %s grid", config.solver_grid)
    return solved, exact


def _estimator(config: ExperimentConfig, data, margins, manager: DaskManager) -> tuple[Callable, list[str]]:
    geom, probe = config.geometry, config.probe
    if config.method == "carleman":
        def estimator(tau: float):
            return carleman_estimate(
                data, geom, probe, tau, cfg=config.kernel, min_margin=config.min_margin, manager=manager
            )

        return estimator, []

    delta = config.cone.get("delta", "auto")
    if delta == "auto":
        delta = default_delta(geom, probe, margins=margins)
    aux = config.cone.get("aux_points")
    cone = fit_cone(geom, probe, float(delta), None if aux is None else np.asarray(aux, dtype=float))
    lines = [f"cone delta: {cone.delta:.6g}"]

    constant = config.constant_mode
    if constant != "finite_tau":
        constant = operative_constant(cone, constant, calibration_taus=config.constant_taus, manager=manager)
        lines.append(f"constant ({config.constant_mode}): mu={constant.mu:g}, C={constant.C:.10g}")
    else:
        lines.append("constant (finite_tau): recomputed at every tau")

    def estimator(tau: float):
        return enclosure_estimate(
            data,
            geom,
            cone,
            probe,
            tau,
            constant=constant,
            cfg=config.kernel,
            min_margin=config.min_margin,
            manager=manager,
        )

    return estimator, lines


def _summary(config: ExperimentConfig, margins, constant_lines: list[str], report: SweepReport) -> str:
    best = report.best
    limit, limit_error = report.extrapolated()
    lines = [
        f"experiment: {config.name}",
        f"method: {config.method}",
        f"target: x={config.geometry.target.x.tolist()}, t={config.geometry.target.t:g}",
        f"probe: c={config.probe.c:g}, omega={config.probe.omega.tolist()}",
        f"margins: m_T={margins.m_T:.6g}, m_U={margins.m_U:.6g}, m_Gamma={margins.m_Gamma:.6g}",
        *constant_lines,
        f"taus evaluated: {[row.tau for row in report.rows]}",
        f"terminated early: {report.terminated_early}",
        f"best tau: {best.tau:g}",
        f"estimate: {complex(best.estimate).real:.10g} (imaginary part {complex(best.estimate).imag:.3g})",
        f"extrapolated: {limit.real:.10g} +- {limit_error:.3g}",
    ]
    if best.reference is not None:
        lines.append(f"reference: {best.reference:.10g}")
        lines.append(f"relative error: {best.rel_error:.3g}")
    if report.trend_defined:
        lines.append(f"error trend (d log error / d tau): {report.trend_slope:.4g}")
    return "\n".join(lines) + "\n"


def run_reconstruct(config: ExperimentConfig, output: Path, manager: Optional[DaskManager] = None, silent: bool = False) -> int:
    """Validates the configuration, samples the data and sweeps tau"""
    config.require("geometry", "probe")
    geom, probe = config.geometry, config.probe
    margins = compute_margins(geom, probe)
    validate_config(geom, probe, config.min_margin)
    manager = manager or DaskManager()

    data_field, exact = _data_field(config)
    panels = {"time_panels": None, "space_panels": None, "initial_panels": None}
    panels.update({k: v for k, v in config.quadrature.items() if k in panels})
    if any(v is None for v in panels.values()):
        suggested = suggest_panels(geom, probe, max(config.taus))
        panels = {k: suggested[k] if v is None else int(v) for k, v in panels.items()}
    order = int(config.quadrature.get("order", 16))
    data = extract_traces(data_field, geom, rho=config.rho, order=order, **panels)
    if config.noise is not None:
        data = add_noise(data, **config.noise)

    reference = None
    if exact is not None:
        target = geom.target
        reference = float(exact.value(target.x[None, :], np.array([target.t]))[0])

    estimator, constant_lines = _estimator(config, data, margins, manager)
    report = tau_sweep(
        estimator,
        config.taus,
        reference=reference,
        stop_on_growth=config.stop_on_growth,
        manager=manager,
        silent=silent,
    )

    report.to_csv(output / f"{config.name}_sweep.csv", timings=config.timings)
    summary = _summary(config, margins, constant_lines, report)
    (output / f"{config.name}_summary.txt").write_text(summary)
    if not silent:
        print(summary, end="")
    return EXIT_OK


def run_visibility_oracle(config: ExperimentConfig, output: Path, manager: Optional[DaskManager] = None, silent: bool = False) -> int:
    """Fits (mu, C) for the configured cone and compares with the closed forms"""
    config.require("probe")
    settings = config.visibility
    if "target" in settings:
        target = SpaceTimePoint(np.atleast_1d(np.asarray(settings["target"]["x"], dtype=float)), float(settings["target"]["t"]))
    elif config.geometry is not None:
        target = config.geometry.target
    else:
        raise ConfigError("visibility.target", "is required without a geometry")
    aux = settings.get("aux_points")
    cone = build_cone(target, config.probe, float(settings.get("delta", 0.1)), None if aux is None else np.asarray(aux, dtype=float))

    options = {k: settings[k] for k in ("cutoff", "tol", "max_levels") if k in settings}
    taus = settings.get("taus", list(DEFAULT_CALIBRATION_TAUS))
    fit = visibility_limit_numeric(cone, taus=taus, manager=manager, **options)
    fit.to_dataframe().to_csv(output / f"{config.name}_fit.csv", index=False, float_format="%.17g")
    report = calibration_report(cone, fit)
    report.to_csv(output / f"{config.name}_calibration.csv", index=False, float_format="%.17g")
    if not silent:
        print(report.T.to_string(header=False))
    return EXIT_OK


def run_verify_kernel(output: Path, samples: int = 100, seed: int = 0, silent: bool = False) -> int:
    checks = run_kernel_checks(count=samples, seed=seed)
    checks.to_csv(output / "kernel_checks.csv", index=False, float_format="%.6g")
    if not silent:
        print(checks.to_string(index=False))
    return EXIT_OK if checks["passed"].all() else EXIT_FAILED


def convergence_table(config: ExperimentConfig) -> pd.DataFrame:
    """Error at the grid nodes of forward solves against the analytic field, per grid"""
    config.require("geometry")
    geom = config.geometry
    exact = analytic_solution(config.field_kind, config.field_params, geom.n)
    rows = []
    for Nx, Nt in config.forward.get("grids", DEFAULT_GRIDS):
        solved = solve_forward(
            geom,
            initial=lambda x: exact.value(np.reshape(x, (-1, 1)), np.zeros(np.size(x))),
            h0=_robin_data(exact, geom, config.rho),
            rho=config.rho,
            grid=(Nx, Nt),
        )
        X, Tm = np.meshgrid(solved.x, solved.t)
        truth = exact.value(X.reshape(-1, 1), Tm.ravel()).reshape(X.shape)
        error = float(np.max(np.abs(solved.data.values - truth)))
        rows.append({"Nx": Nx, "Nt": Nt, "max_error": error})
    df = pd.DataFrame(rows)
    df["ratio"] = df["max_error"].shift(1) / df["max_error"]
    return df


def run_forward_solve(config: ExperimentConfig, output: Path, silent: bool = False) -> int:
    table = convergence_table(config)
    table.to_csv(output / f"{config.name}_convergence.csv", index=False, float_format="%.17g")
    if not silent:
        print(table.to_string(index=False))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heat-enclosure",
        description="Interior temperature reconstruction from lateral Cauchy data.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--output", default=None, help="directory for the CSV and summary files")
    parser.add_argument("--silent", action="store_true", help="do not print summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument(
            "--config", required=True, help=f"JSON file or bundled name ({', '.join(bundled_configs())})"
        )
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        return p

    reconstruct = with_config("reconstruct", "sweep a reconstruction formula over tau")
    reconstruct.add_argument("--tau-max", type=float, default=None, help="drop taus above this value")
    reconstruct.add_argument("--method", choices=["carleman", "enclosure"], default=None)

    with_config("visibility-oracle", "fit the visibility constant of a cone")
    with_config("forward-solve", "convergence table of the Crank-Nicolson solver")

    verify = sub.add_parser("verify-kernel", help="run the kernel invariant checks")
    verify.add_argument("--samples", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    overrides = list(args.overrides)
    if getattr(args, "method", None) is not None:
        overrides.append(f"method={args.method}")
    config = load_config(args.config, overrides)
    if getattr(args, "tau_max", None) is not None:
        config.taus = [tau for tau in config.taus if tau <= args.tau_max]
    return config


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=VERBOSITY[min(args.verbose, len(VERBOSITY) - 1)],
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )

    try:
        if args.command == "verify-kernel":
            return run_verify_kernel(_output_directory(args), args.samples, args.seed, args.silent)
        config = _load(args)
        output = _output_directory(args, config)
        if args.command == "reconstruct":
            return run_reconstruct(config, output, silent=args.silent)
        if args.command == "visibility-oracle":
            return run_visibility_oracle(config, output, silent=args.silent)
        return run_forward_solve(config, output, silent=args.silent)
    except ConfigurationRejectedError as e:
        logger.error("Rejected: %s", e)
        print(f"Rejected (hypothesis {e.hypothesis}, {e.condition}): {e}", file=sys.stderr)
        return EXIT_REJECTED
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except RuntimeError as e:
        print(f"Failed: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
