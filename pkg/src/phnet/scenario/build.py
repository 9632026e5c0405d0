"""Turn a validated scenario into network, controller and initial state objects."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from phnet.control import ControllerSpec, controller_inputs, freeze, resolve
from phnet.energy import build_hamiltonian
from phnet.errors import InvalidModelError
from phnet.graph import Graph, NodeClass
from phnet.microgrid import GridConfig
from phnet.microgrid import build as build_grid
from phnet.microgrid import initial_state as grid_initial_state
from phnet.network import EdgeBank, NetworkSpec, NodeSpec, ReducedState
from phnet.scenario.schema import ControllerSection, Matrix, NodeEntry, ScenarioFile, Vector
from phnet.steadystate import agreement_output


def as_matrix(value: Matrix) -> np.ndarray:
    return np.atleast_2d(np.asarray(value, dtype=np.float64))


def as_vector(value: Vector) -> np.ndarray:
    return np.atleast_1d(np.asarray(value, dtype=np.float64)).reshape(-1)


@dataclass(frozen=True, eq=False)
class BuiltScenario:
    """Objects behind one scenario; ``network``/``controller`` are not yet resolved."""

    name: str
    seed: int
    network: NetworkSpec
    controller: ControllerSpec
    s0: ReducedState
    grid: GridConfig | None = None

    @cached_property
    def resolved(self) -> tuple[NetworkSpec, ControllerSpec]:
        """Network with fail-mode nodes folded in, and the controller acting on it."""
        return resolve(self.controller, self.network)

    def target_output(self) -> np.ndarray:
        """y* for steady-state analysis: the controller set-point or the free agreement value."""
        network, controller = self.resolved
        if controller.y_star is not None:
            return controller.y_star
        inputs = network.inputs_from(controller_inputs(controller, controller.initial_state()))
        return agreement_output(network, inputs)


def node_spec(entry: NodeEntry) -> NodeSpec:
    return NodeSpec(
        J=as_matrix(entry.J),
        R=as_matrix(entry.R),
        G=as_matrix(entry.G),
        H=build_hamiltonian(entry.H.params()),
        node_class=NodeClass(entry.node_class),
        delta=as_vector(entry.delta),
    )


def controller_spec(section: ControllerSection | None, network: NetworkSpec) -> ControllerSpec:
    m = network.m
    if section is None or section.kind == "none":
        return ControllerSpec.none(m)

    if section.nodes is None:
        nodes = list(network.partition.controlled)
    else:
        nodes = [n - 1 for n in section.nodes]
    xi0 = None if section.xi0 is None else np.asarray(section.xi0, dtype=np.float64)

    if section.kind == "constant":
        assert section.levels is not None
        levels = np.stack([as_vector(v) for v in section.levels]) if section.levels else None
        spec = ControllerSpec(kind="constant", nodes=tuple(nodes), m=m, levels=levels)
    elif section.kind == "integral":
        assert section.y_star is not None
        spec = ControllerSpec.integral(nodes, as_vector(section.y_star), m=m, xi0=xi0)
    else:
        assert section.y_star is not None and section.Q is not None and section.comm is not None
        local = {node + 1: k for k, node in enumerate(nodes)}
        try:
            comm_edges = tuple((local[a], local[b]) for a, b in section.comm)
        except KeyError as exc:
            raise InvalidModelError(
                f"comm link uses node {exc.args[0]}, not a controller node"
            ) from exc
        spec = ControllerSpec.distributed(
            nodes,
            as_vector(section.y_star),
            [as_matrix(Q) for Q in section.Q],
            Graph(num_nodes=len(nodes), edges=comm_edges),
            m=m,
            xi0=xi0,
        )

    if section.frozen:
        frozen = sorted(section.frozen)
        spec = freeze(spec, [n - 1 for n in frozen], [as_vector(section.frozen[n]) for n in frozen])
    return spec


def build_scenario(scenario: ScenarioFile) -> BuiltScenario:
    meta = scenario.meta
    if scenario.grid is not None:
        network, controller = build_grid(scenario.grid)
        return BuiltScenario(
            name=meta.name,
            seed=meta.seed,
            network=network,
            controller=controller,
            s0=grid_initial_state(scenario.grid, network),
            grid=scenario.grid,
        )

    assert scenario.graph is not None and scenario.nodes is not None
    graph = Graph.from_pairs(
        scenario.graph.num_nodes, [(e.from_node, e.to_node) for e in scenario.graph.edges]
    )
    nodes = tuple(node_spec(entry) for entry in scenario.nodes)
    edges = EdgeBank.of([build_hamiltonian(e.H.params()) for e in scenario.graph.edges])
    network = NetworkSpec(graph=graph, nodes=nodes, edges=edges)

    layout = network.layout
    states: dict[int, np.ndarray] = {}
    for i in layout.node_slices:
        entry = scenario.nodes[i]
        n = network.nodes[i].n
        x0 = np.zeros(n) if entry.x0 is None else as_vector(entry.x0)
        if x0.shape != (n,):
            raise InvalidModelError(f"x0 of node {i + 1} has {x0.size} entries, expected {n}")
        states[i] = x0
    eta0 = [
        np.broadcast_to(as_vector(e.eta0), (network.m,)) for e in scenario.graph.edges
    ]
    s0 = ReducedState(
        eta=np.concatenate(eta0) if eta0 else np.zeros(0),
        x1=layout.stack_nodes(states),
        xi=np.zeros(0),
    )
    return BuiltScenario(
        name=meta.name,
        seed=meta.seed,
        network=network,
        controller=controller_spec(scenario.controller, network),
        s0=s0,
    )
