"""Command runners: one function per CLI command, each returning a RunReport."""

from __future__ import annotations

import functools
import json
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from phnet.analysis.checks import (
    ValidationReport,
    structural_checks,
    uniqueness_check,
    validate_network,
)
from phnet.analysis.report import RunReport, slug
from phnet.config.models import (
    FeasibilityConfig,
    IntegratorConfig,
    MonitorConfig,
    PhnetConfig,
)
from phnet.control import controller_inputs, steady_controller_state, warm_start
from phnet.errors import (
    InfeasibleError,
    InvalidModelError,
    ScenarioError,
    StiffnessError,
    UnsupportedConfigurationError,
)
from phnet.graph import is_acyclic
from phnet.microgrid import DispatchReport, dispatch, recover_angles, swing_rates
from phnet.scenario import BuiltScenario, LoadedScenario, build_scenario, parse_scenario
from phnet.sim import basin_probe, integrate, lyapunov_series, max_disagreement, settle
from phnet.steadystate import (
    Equilibrium,
    SteadyStateReport,
    equilibrium_states,
    optimal_report,
    qp_oracle,
    solve_feasibility,
)
from phnet.utils.logging import get_logger

log = get_logger(__name__)

StartMode = Literal["scenario", "equilibrium", "warm"]


class RunOptions(BaseModel):
    """Per-run knobs; experiment ``params`` in a scenario map onto these fields."""

    model_config = ConfigDict(extra="forbid")

    config: PhnetConfig = Field(default_factory=PhnetConfig)
    out_dir: Path | None = None
    seed: int | None = None
    tol: float | None = Field(None, gt=0)
    allow_infeasible: bool = False
    start: StartMode = "scenario"
    warm_radius: float = Field(0.1, gt=0)
    method: Literal["rk4_fixed", "dp45_adaptive"] | None = None
    t_end: float | None = Field(None, gt=0)
    record_stride: int | None = Field(None, ge=1)
    radius: float = Field(0.1, gt=0)
    trials: int = Field(20, ge=1)
    workers: int | None = Field(None, ge=1)
    show_progress: bool | None = None
    samples: int = Field(100, ge=1)

    def merged(self, params: dict[str, Any]) -> RunOptions:
        if "config" in params:
            raise ScenarioError("experiment params cannot replace the toolkit config")
        return RunOptions.model_validate(
            {**self.model_dump(exclude={"config"}), **params, "config": self.config}
        )

    @property
    def output_dir(self) -> Path:
        return self.out_dir if self.out_dir is not None else Path(self.config.output.directory)

    def feasibility_tol(self) -> float:
        return self.tol if self.tol is not None else self.config.feasibility.tol

    def progress_enabled(self) -> bool:
        if self.show_progress is not None:
            return self.show_progress
        return self.config.probe.show_progress


def integrator_settings(loaded: LoadedScenario, opts: RunOptions) -> IntegratorConfig:
    """Toolkit defaults, then the scenario's integrator section, then run options."""
    merged = opts.config.integrator.model_dump()
    merged.update(loaded.scenario.integrator.model_dump(exclude_none=True))
    if opts.method is not None:
        merged["method"] = opts.method
    if opts.t_end is not None:
        merged["t_end"] = opts.t_end
    if opts.record_stride is not None:
        merged["record_stride"] = opts.record_stride
    return IntegratorConfig.model_validate(merged)


def _seed(built: BuiltScenario, opts: RunOptions) -> int:
    return built.seed if opts.seed is None else opts.seed


def _effective(loaded: LoadedScenario, opts: RunOptions, seed: int) -> dict[str, Any]:
    options = opts.model_dump(mode="json", exclude={"config", "out_dir"})
    return {
        "scenario": loaded.raw,
        "seed": seed,
        "integrator": integrator_settings(loaded, opts).model_dump(),
        "feasibility": {**opts.config.feasibility.model_dump(), "tol": opts.feasibility_tol()},
        "monitors": opts.config.monitors.model_dump(),
        "options": options,
    }


def _report(command: str, loaded: LoadedScenario, opts: RunOptions, seed: int) -> RunReport:
    return RunReport(
        command=command,
        scenario=loaded.scenario.meta.name,
        scenario_hash=loaded.digest,
        config=_effective(loaded, opts, seed),
    )


def steady_state(
    built: BuiltScenario, opts: RunOptions
) -> tuple[SteadyStateReport, DispatchReport | None]:
    """The steady state the closed loop should rest on, by controller kind.

    integral: inputs are unknowns; distributed: inputs at the optimal
    allocation; none/constant: inputs fixed at the controller output; grid
    scenarios go through the dispatch.
    """
    network, controller = built.resolved
    tol = opts.feasibility_tol()
    max_iter = opts.config.feasibility.max_iterations
    shrink = opts.config.feasibility.shrink
    if built.grid is not None and controller.nodes:
        result = dispatch(built.grid, tol=tol, max_iter=max_iter, shrink=shrink)
        assert result.steady_state is not None
        return result.steady_state, result

    y_star = built.target_output()
    if controller.kind == "distributed":
        report = optimal_report(
            network, y_star, controller.weight_map(), tol=tol, max_iter=max_iter, shrink=shrink
        )
        return report, None
    if controller.kind == "integral":
        return solve_feasibility(network, y_star, tol=tol, max_iter=max_iter, shrink=shrink), None
    fixed = controller_inputs(controller, controller.initial_state())
    report = solve_feasibility(
        network, y_star, u_bar=fixed, tol=tol, max_iter=max_iter, shrink=shrink
    )
    return report, None


def closed_loop_equilibrium(built: BuiltScenario, report: SteadyStateReport) -> Equilibrium:
    network, controller = built.resolved
    eq = equilibrium_states(network, report)
    return eq.with_controller(steady_controller_state(controller, report))


def run_check(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    built = build_scenario(loaded.scenario)
    report, grid = steady_state(built, opts)
    result: dict[str, Any] = {"steady_state": report.to_dict()}
    if grid is not None:
        result["dispatch"] = grid.to_dict()
    run = _report("check", loaded, opts, _seed(built, opts))
    run.result = result
    run.ok = report.feasible
    return run


def _grid_terminal(
    built: BuiltScenario, eta: np.ndarray, y: np.ndarray, u: np.ndarray, grid: DispatchReport | None
) -> dict[str, Any]:
    """Injected powers and the nodal power balance of the angle-form equations."""
    assert built.grid is not None
    network, controller = built.resolved
    injected = {i + 1: float(u[i, 0]) for i in controller.nodes}
    theta = recover_angles(network, eta)
    omega_dot, mismatch = swing_rates(built.grid, theta, y[:, 0], injected)
    inertia = np.array([bus.inertia or 0.0 for bus in built.grid.buses])
    imbalance = inertia * omega_dot + mismatch
    data: dict[str, Any] = {
        "injected_power": {str(b): v for b, v in sorted(injected.items())},
        "frequencies": y[:, 0],
        "max_frequency": float(np.max(np.abs(y[:, 0]))),
        "power_balance_residual": float(np.max(np.abs(imbalance))),
        "angles": theta,
    }
    if grid is not None:
        data["dispatch_deviation"] = max(
            (abs(injected[b] - grid.u_bar[b]) for b in grid.u_bar), default=0.0
        )
    return data


def run_simulate(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    built = build_scenario(loaded.scenario)
    seed = _seed(built, opts)
    network, controller = built.resolved
    cfg = integrator_settings(loaded, opts)
    report, grid = steady_state(built, opts)
    result: dict[str, Any] = {"steady_state": report.to_dict()}

    if not report.feasible and not opts.allow_infeasible:
        run = _report("simulate", loaded, opts, seed)
        result["error"] = "steady state is infeasible; rerun with --allow-infeasible to explore"
        run.result, run.ok = result, False
        return run

    equilibrium = closed_loop_equilibrium(built, report) if report.feasible else None
    s0 = built.s0
    if opts.start != "scenario":
        if equilibrium is None:
            raise InfeasibleError(f"--start {opts.start} needs a feasible steady state")
        if opts.start == "equilibrium":
            s0 = equilibrium.reduced(network)
        else:
            rng = np.random.default_rng(seed)
            controller = warm_start(controller, equilibrium.xi, opts.warm_radius, rng)

    try:
        traj = integrate(network, controller, s0, cfg, seed=seed)
    except StiffnessError as exc:
        run = _report("simulate", loaded, opts, seed)
        result["error"] = str(exc)
        run.result, run.ok = result, False
        return run

    monitors = opts.config.monitors
    if equilibrium is not None:
        monitor = lyapunov_series(
            traj,
            network,
            controller,
            equilibrium,
            slack=monitors.monotone_slack,
            settle_tol=monitors.settle_tol,
            settle_window=monitors.settle_window,
        )
        result["monitor"] = monitor.to_dict()
        settle_time = monitor.settle_time
        result["v_monotone"] = monitor.v_monotone
    else:
        window = min(monitors.settle_window, float(traj.times[-1] - traj.times[0]))
        settle_time = settle(traj, report.y_star, monitors.settle_tol, window)
        result["v_monotone"] = None

    y_end, u_end = traj.outputs(-1), traj.inputs(-1)
    result.update(
        {
            "settle_time": settle_time,
            "completed": traj.completed,
            "exit_event": traj.exit_event.to_dict() if traj.exit_event else None,
            "metadata": traj.metadata,
            "max_disagreement": max_disagreement(traj.y[-1], network.m),
            "terminal": {
                "t": float(traj.times[-1]),
                "y": {str(i + 1): y_end[i] for i in range(network.num_nodes)},
                "u": {str(i + 1): u_end[i] for i in controller.nodes},
                "xi": traj.xi[-1],
            },
        }
    )
    if built.grid is not None:
        result["grid"] = _grid_terminal(built, traj.eta[-1], y_end, u_end, grid)

    run = _report("simulate", loaded, opts, seed)
    csv = opts.output_dir / f"{slug(built.name)}_trajectory.csv"
    run.outputs["trajectory"] = str(traj.to_csv(csv, opts.config.output.float_format))
    run.result = result
    run.ok = traj.completed
    log.info("simulate_done", settle_time=settle_time, completed=traj.completed, samples=len(traj))
    return run


def run_dispatch(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    built = build_scenario(loaded.scenario)
    run = _report("dispatch", loaded, opts, _seed(built, opts))
    feas = opts.config.feasibility
    tol, max_iter, shrink = opts.feasibility_tol(), feas.max_iterations, feas.shrink
    if built.grid is not None:
        grid = dispatch(built.grid, tol=tol, max_iter=max_iter, shrink=shrink)
        run.result = {"dispatch": grid.to_dict()}
        run.ok = grid.feasible
        return run

    network, controller = built.resolved
    if controller.kind != "distributed":
        raise InvalidModelError("dispatch needs a distributed controller carrying Q weights")
    assert controller.y_star is not None
    weights = controller.weight_map()
    report = optimal_report(
        network, controller.y_star, weights, tol=tol, max_iter=max_iter, shrink=shrink
    )
    oracle = qp_oracle(network, controller.y_star, weights)
    assert report.u_bar is not None
    deviation = max(
        float(np.max(np.abs(report.u_bar[i] - oracle.u_bar[i]))) for i in controller.nodes
    )
    run.result = {
        "steady_state": report.to_dict(),
        "qp_lambda": oracle.lam,
        "qp_deviation": deviation,
        "cost": oracle.cost(weights),
    }
    run.ok = report.feasible
    return run


def run_validate(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    scenario = loaded.scenario
    checks = ValidationReport()
    if scenario.nodes is not None:
        for check in structural_checks(scenario.nodes):
            checks.add(check)
    seed = opts.seed if opts.seed is not None else scenario.meta.seed
    if checks.passed:
        built = build_scenario(scenario)
        network, controller = built.resolved
        rng = np.random.default_rng(seed)
        for check in validate_network(network, controller, built.s0, rng, opts.samples).checks:
            checks.add(check)
        if is_acyclic(network.graph):
            try:
                report, _ = steady_state(built, opts)
            except UnsupportedConfigurationError as exc:
                log.info("uniqueness_check_skipped", reason=str(exc))
            else:
                if report.feasible:
                    checks.add(
                        uniqueness_check(
                            lambda eta0: _resolve_from(built, opts, report, eta0), report, rng
                        )
                    )
    run = _report("validate", loaded, opts, seed)
    run.result = {"validation": checks.to_dict()}
    run.ok = checks.passed
    return run


def _resolve_from(
    built: BuiltScenario, opts: RunOptions, report: SteadyStateReport, eta0: np.ndarray
) -> SteadyStateReport:
    """Re-solve the fixed-input steady state of ``report`` from another eta guess."""
    network, _ = built.resolved
    return solve_feasibility(
        network,
        report.y_star,
        u_bar=report.u_bar or {},
        eta0=eta0,
        tol=opts.feasibility_tol(),
        max_iter=opts.config.feasibility.max_iterations,
        shrink=opts.config.feasibility.shrink,
    )


def run_probe(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    built = build_scenario(loaded.scenario)
    seed = _seed(built, opts)
    network, controller = built.resolved
    report, _ = steady_state(built, opts)
    if not report.feasible:
        raise InfeasibleError(f"basin probe needs a feasible steady state: {report.reason}")
    equilibrium = closed_loop_equilibrium(built, report)
    monitors = opts.config.monitors
    probe = basin_probe(
        network,
        controller,
        equilibrium,
        radius=opts.radius,
        trials=opts.trials,
        cfg=integrator_settings(loaded, opts),
        seed=seed,
        workers=opts.workers or opts.config.probe.workers,
        tol=monitors.settle_tol,
        window=monitors.settle_window,
        show_progress=opts.progress_enabled(),
    )
    run = _report("probe", loaded, opts, seed)
    run.result = {"probe": probe.to_dict(), "steady_state": report.to_dict()}
    return run


def _timed(
    fn: Callable[[LoadedScenario, RunOptions], RunReport],
) -> Callable[[LoadedScenario, RunOptions], RunReport]:
    @functools.wraps(fn)
    def wrapper(loaded: LoadedScenario, opts: RunOptions) -> RunReport:
        started = time.perf_counter()
        run = fn(loaded, opts)
        if opts.config.output.timing:
            run.wall_clock = time.perf_counter() - started
        return run

    return wrapper


COMMANDS: dict[str, Callable[[LoadedScenario, RunOptions], RunReport]] = {
    "check": _timed(run_check),
    "simulate": _timed(run_simulate),
    "dispatch": _timed(run_dispatch),
    "validate": _timed(run_validate),
    "probe": _timed(run_probe),
}


def run_experiments(
    loaded: LoadedScenario, opts: RunOptions, parallel: bool = False
) -> list[RunReport]:
    """Run every experiment listed in the scenario, in order.

    With ``parallel`` the experiments run on a thread pool; they share no
    mutable state, and the reports keep the listing order. Progress bars are
    off in parallel since only one live display can be active.
    """
    quiet = {"show_progress": False} if parallel else {}
    jobs = [
        (COMMANDS[exp.command], opts.merged({**exp.params, **quiet}))
        for exp in loaded.scenario.experiments
    ]
    if not parallel or len(jobs) < 2:
        return [fn(loaded, o) for fn, o in jobs]
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        return list(pool.map(lambda job: job[0](loaded, job[1]), jobs))


def replay(report_path: str | Path, config: PhnetConfig | None = None) -> RunReport:
    """Rerun a command from the scenario and settings embedded in a written report."""
    data = json.loads(Path(report_path).read_text())
    embedded = data["config"]
    loaded = parse_scenario(embedded["scenario"])
    if loaded.digest != data["scenario_hash"]:
        raise ScenarioError(f"{report_path}: embedded scenario does not match its hash")
    base = config or PhnetConfig()
    config = base.model_copy(
        update={
            "integrator": IntegratorConfig.model_validate(embedded["integrator"]),
            "feasibility": FeasibilityConfig.model_validate(embedded["feasibility"]),
            "monitors": MonitorConfig.model_validate(embedded["monitors"]),
        }
    )
    options = {**embedded["options"], "seed": embedded["seed"]}
    opts = RunOptions.model_validate({**options, "config": config})
    return COMMANDS[data["command"]](loaded, opts)
