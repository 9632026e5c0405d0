"""Tests for the steppers, the closed-loop runner and trajectory export."""

import math

import numpy as np
import pytest

from phnet.config.models import IntegratorConfig
from phnet.control import ControllerSpec
from phnet.energy import NegCosineHamiltonian
from phnet.errors import InfeasibleError, NoPreimageError, StiffnessError
from phnet.graph import Graph
from phnet.network import EdgeBank, NetworkSpec, ReducedState
from phnet.sim import basin_probe, integrate
from phnet.sim.integrators import (
    MAX_FACTOR,
    MIN_FACTOR,
    dp45_step,
    error_norm,
    rk4_step,
    step_factor,
)
from phnet.steadystate import agreement_output, equilibrium_states, solve_feasibility


def decay(t, y):
    return -y


def _equilibrium(spec):
    report = solve_feasibility(spec, agreement_output(spec))
    return equilibrium_states(spec, report)


def test_rk4_step_matches_exponential():
    y = rk4_step(decay, 0.0, np.array([1.0]), 0.1)
    assert y[0] == pytest.approx(math.exp(-0.1), abs=1e-7)


def test_dp45_step_error_and_last_stage():
    y_new, err, k_last = dp45_step(decay, 0.0, np.array([1.0]), 0.1, np.array([-1.0]))
    assert y_new[0] == pytest.approx(math.exp(-0.1), abs=1e-9)
    assert abs(err[0]) < 1e-6
    assert k_last == pytest.approx(-y_new)


def test_step_factor_is_clipped():
    assert step_factor(0.0) == MAX_FACTOR
    assert step_factor(1e9) == MIN_FACTOR
    assert step_factor(1.0) == pytest.approx(0.9)


def test_error_norm_of_empty_state():
    assert error_norm(np.zeros(0), np.zeros(0), np.zeros(0), 1e-6, 1e-9) == 0.0


def test_equilibrium_is_stationary(ring4):
    eq = _equilibrium(ring4)
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=2.0)
    traj = integrate(ring4, ControllerSpec.none(), eq.reduced(ring4), cfg)
    assert traj.completed
    assert np.allclose(traj.y, eq.y_star[0], atol=1e-8)
    assert np.allclose(traj.eta, eq.eta, atol=1e-8)


def test_rk4_records_every_stride(ring4):
    eq = _equilibrium(ring4)
    cfg = IntegratorConfig(method="rk4_fixed", step=0.1, t_end=1.0, record_stride=5)
    traj = integrate(ring4, ControllerSpec.none(), eq.reduced(ring4), cfg)
    assert traj.times == pytest.approx([0.0, 0.5, 1.0])
    assert traj.metadata["accepted"] == 10


def test_dp45_reaches_t_end(ring4):
    eq = _equilibrium(ring4)
    s0 = ReducedState(eta=eq.eta + 0.1, x1=eq.reduced(ring4).x1, xi=np.zeros(0))
    cfg = IntegratorConfig(method="dp45_adaptive", t_end=5.0, max_step=0.5)
    traj = integrate(ring4, ControllerSpec.none(), s0, cfg)
    assert traj.completed
    assert traj.times[-1] == pytest.approx(5.0)
    assert traj.metadata["rhs_evals"] > 0


def test_overloaded_line_exits_domain(make_node):
    spec = NetworkSpec(
        graph=Graph.from_pairs(2, [(1, 2)]),
        nodes=(make_node(12, delta=3.0), make_node(12, delta=-3.0)),
        edges=EdgeBank.of([NegCosineHamiltonian(1.0)]),
    )
    s0 = ReducedState(eta=np.zeros(1), x1=np.zeros(2), xi=np.zeros(0))
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=10.0)
    traj = integrate(spec, ControllerSpec.none(), s0, cfg)
    assert not traj.completed
    assert traj.exit_event.kind == "domain"
    assert traj.times[-1] < 10.0
    assert np.all(np.abs(traj.eta) < math.pi / 2)


def test_step_underflow_raises(ring4, monkeypatch):
    monkeypatch.setattr("phnet.sim.runner.error_norm", lambda *args: 1e6)
    eq = _equilibrium(ring4)
    cfg = IntegratorConfig(method="dp45_adaptive", t_end=1.0)
    with pytest.raises(StiffnessError, match="underflowed"):
        integrate(ring4, ControllerSpec.none(), eq.reduced(ring4), cfg)


def test_initial_state_size_checked(ring4):
    s0 = ReducedState(eta=np.zeros(3), x1=np.zeros(2), xi=np.zeros(0))
    cfg = IntegratorConfig(method="rk4_fixed", step=0.1, t_end=1.0)
    with pytest.raises(ValueError, match="initial state"):
        integrate(ring4, ControllerSpec.none(), s0, cfg)


def test_csv_header_and_determinism(ring4, tmp_path):
    eq = _equilibrium(ring4)
    s0 = ReducedState(eta=eq.eta + 0.05, x1=eq.reduced(ring4).x1, xi=np.zeros(0))
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=1.0)
    first = integrate(ring4, ControllerSpec.none(), s0, cfg).to_csv(tmp_path / "a.csv")
    second = integrate(ring4, ControllerSpec.none(), s0, cfg).to_csv(tmp_path / "b.csv")

    header = first.read_text().splitlines()[0].split(",")
    assert header[:7] == ["t", "eta_1", "eta_2", "eta_3", "eta_4", "x_1", "x_2"]
    assert header[7:15] == [f"y_{i}" for i in range(1, 5)] + [f"u_{i}" for i in range(1, 5)]
    assert header[-6:] == ["V", "W_n", "W_e", "W_c", "alg_residual", "domain_margin"]
    assert first.read_bytes() == second.read_bytes()


def test_integral_controller_state_is_recorded(path3):
    c = ControllerSpec.integral([0], [0.3], xi0=np.array([0.1]))
    s0 = ReducedState(eta=np.zeros(2), x1=np.zeros(3), xi=np.zeros(0))
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=0.5)
    traj = integrate(path3, c, s0, cfg)
    assert traj.xi.shape == (11, 1)
    assert traj.xi[0, 0] == pytest.approx(0.1)
    assert traj.labels["xi"] == ["xi_1"]
    assert traj.inputs(0)[0] == pytest.approx([0.1])


def _final_state(traj):
    return np.concatenate([traj.eta[-1], traj.x1[-1]])


def test_dp45_error_shrinks_with_tolerance(ring4):
    eq = _equilibrium(ring4)
    x1 = eq.reduced(ring4).x1
    s0 = ReducedState(eta=eq.eta + 0.1, x1=x1 - 0.1, xi=np.zeros(0))
    fine = IntegratorConfig(method="rk4_fixed", step=0.002, t_end=2.0)
    reference = _final_state(integrate(ring4, ControllerSpec.none(), s0, fine))

    errors, evals = [], []
    for rel_tol, abs_tol in ((1e-3, 1e-5), (1e-10, 1e-12)):
        cfg = IntegratorConfig(
            method="dp45_adaptive", t_end=2.0, max_step=0.5, rel_tol=rel_tol, abs_tol=abs_tol
        )
        traj = integrate(ring4, ControllerSpec.none(), s0, cfg)
        assert traj.times[-1] == pytest.approx(2.0)
        errors.append(float(np.max(np.abs(_final_state(traj) - reference))))
        evals.append(traj.metadata["rhs_evals"])
    loose, tight = errors
    assert tight <= loose
    assert tight < 1e-7
    assert evals[1] > evals[0]


def test_tiny_radius_always_settles(ring4):
    eq = _equilibrium(ring4)
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=10.0)
    result = basin_probe(ring4, ControllerSpec.none(), eq, 1e-6, 4, cfg, seed=3)
    assert result.fraction == 1.0
    assert all(t is not None for t in result.settle_times)


def test_broken_trial_counts_as_unsettled(ring4, monkeypatch):
    eq = _equilibrium(ring4)

    def no_state(*args, **kwargs):
        raise NoPreimageError("gradient value outside the range of grad H")

    monkeypatch.setattr("phnet.sim.probe.integrate", no_state)
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=1.0)
    result = basin_probe(ring4, ControllerSpec.none(), eq, 0.01, 3, cfg)
    assert result.fraction == 0.0
    assert result.outcomes == (False, False, False)


def test_basin_run_needs_an_equilibrium(ring4):
    cfg = IntegratorConfig(method="rk4_fixed", step=0.05, t_end=1.0)
    with pytest.raises(InfeasibleError):
        basin_probe(ring4, ControllerSpec.none(), None, 0.1, 2, cfg)
