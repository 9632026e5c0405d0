"""Map a microgrid onto the port-Hamiltonian network and its controller."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from phnet.control import ControllerSpec
from phnet.energy import NegCosineHamiltonian, QuadraticHamiltonian
from phnet.errors import InvalidModelError
from phnet.graph import NodeClass
from phnet.microgrid.config import BusConfig, GridConfig
from phnet.network import EdgeBank, NetworkSpec, NodeSpec, ReducedState
from phnet.utils.logging import get_logger

log = get_logger(__name__)

_CLASS = {
    "generator": NodeClass.DIFF_CONTROLLED,
    "inverter": NodeClass.ALG_CONTROLLED,
    "load": NodeClass.ALG_FREE,
}


def _node(bus: BusConfig, frozen_level: float | None) -> NodeSpec:
    node_class = _CLASS[bus.kind]
    delta = bus.delta
    if frozen_level is not None:
        node_class = node_class.without_control()
        delta += frozen_level
    # Generators store momentum p = M omega, so H = p^2 / (2 M); other buses store omega.
    weight = 1.0 / bus.inertia if bus.kind == "generator" and bus.inertia else 1.0
    return NodeSpec(
        J=np.zeros((1, 1)),
        R=np.array([[bus.damping]]),
        G=np.ones((1, 1)),
        H=QuadraticHamiltonian.scalar(weight),
        node_class=node_class,
        delta=np.array([delta]),
    )


def build(cfg: GridConfig) -> tuple[NetworkSpec, ControllerSpec]:
    """Generators -> class 11, inverters -> 21, loads -> 22; failed buses lose control.

    A failed generator becomes class 12 and a failed inverter class 22, each
    with its frozen level added to delta. The controller is distributed with
    y* = 0 and Q = diag(q) over the remaining actuated buses.
    """
    network = NetworkSpec(
        graph=cfg.electrical_graph(),
        nodes=tuple(
            _node(bus, cfg.failed.get(k + 1)) for k, bus in enumerate(cfg.buses)
        ),
        edges=EdgeBank.of([NegCosineHamiltonian(line.gamma) for line in cfg.lines]),
    )
    controlled = [b - 1 for b in cfg.controlled_buses()]
    if not controlled:
        return network, ControllerSpec.none()
    controller = ControllerSpec.distributed(
        nodes=controlled,
        y_star=[0.0],
        weights=[np.array([[cfg.buses[i].q]]) for i in controlled],
        comm=cfg.comm_graph(),
        xi0=None if cfg.xi0 is None else np.asarray(cfg.xi0, dtype=np.float64),
    )
    log.debug(
        "grid_built",
        buses=network.num_nodes,
        lines=network.num_edges,
        controlled=[i + 1 for i in controlled],
        failed=sorted(cfg.failed),
    )
    return network, controller


def inject_failure(
    cfg: GridConfig, buses: Sequence[int], levels: Sequence[float]
) -> GridConfig:
    """Return ``cfg`` with 1-based ``buses`` frozen at constant injections ``levels``."""
    if not buses:
        return cfg
    if len(buses) != len(levels):
        raise InvalidModelError("one level per failed bus is required")
    actuated = set(cfg.actuated_buses())
    for bus in buses:
        if bus not in actuated:
            raise InvalidModelError(f"bus {bus} is not actuated and cannot fail")
    failed = {**cfg.failed, **{int(b): float(v) for b, v in zip(buses, levels, strict=True)}}
    if set(failed) >= actuated:
        raise InvalidModelError("failing every actuated bus leaves no controller")
    data = cfg.model_dump(by_alias=True)
    data.update(failed=failed, xi0=None)
    return GridConfig.model_validate(data)


def initial_state(cfg: GridConfig, network: NetworkSpec) -> ReducedState:
    """State from bus ``omega0`` and line ``eta0``; generators start at p = M omega0."""
    layout = network.layout
    states: dict[int, np.ndarray] = {}
    for i in layout.node_slices:
        bus = cfg.buses[i]
        states[i] = np.array([(bus.inertia or 1.0) * bus.omega0])
    return ReducedState(
        eta=np.array([line.eta0 for line in cfg.lines], dtype=np.float64),
        x1=layout.stack_nodes(states),
        xi=np.zeros(0),
    )


def recover_angles(network: NetworkSpec, eta: np.ndarray) -> np.ndarray:
    """Bus angles theta with eta = B^T theta and theta_1 = 0 (least squares on cycles)."""
    theta, *_ = np.linalg.lstsq(network.B.T, np.asarray(eta, dtype=np.float64), rcond=None)
    return theta - theta[0]


def swing_rates(
    cfg: GridConfig,
    theta: np.ndarray,
    omega: np.ndarray,
    u: Mapping[int, float] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Angle-form bus equations.

    Returns (omega_dot, mismatch): for generators omega_dot is
    (-A omega - P + u + delta) / M; for inverters and loads the mismatch
    -A omega - P + u + delta should vanish. Entries for the other kind are zero.
    ``u`` maps 1-based bus numbers to injections; failed buses use their level.
    """
    u = u or {}
    theta = np.asarray(theta, dtype=np.float64)
    omega = np.asarray(omega, dtype=np.float64)
    flows = np.zeros(len(cfg.buses))
    for line in cfg.lines:
        i, j = line.from_bus - 1, line.to_bus - 1
        p = line.gamma * np.sin(theta[i] - theta[j])
        flows[i] += p
        flows[j] -= p
    omega_dot = np.zeros(len(cfg.buses))
    mismatch = np.zeros(len(cfg.buses))
    for k, bus in enumerate(cfg.buses):
        injection = cfg.failed.get(k + 1, u.get(k + 1, 0.0)) if bus.actuated else 0.0
        net = -bus.damping * omega[k] - flows[k] + injection + bus.delta
        if bus.kind == "generator":
            omega_dot[k] = net / float(bus.inertia or 1.0)
        else:
            mismatch[k] = net
    return omega_dot, mismatch
