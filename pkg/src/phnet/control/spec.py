"""Controller specifications and fail-mode freezing."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from phnet.errors import InvalidModelError, UnsupportedConfigurationError
from phnet.graph import Graph, NodeClass, induced_subgraph
from phnet.network import NetworkSpec
from phnet.utils.logging import get_logger

log = get_logger(__name__)

ControllerKind = Literal["none", "constant", "integral", "distributed"]


def _vector(value: np.ndarray | Sequence[float] | float, m: int, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=np.float64)).reshape(-1)
    if arr.shape != (m,):
        raise InvalidModelError(f"{what} has shape {arr.shape}, expected ({m},)")
    return arr


@dataclass(frozen=True, eq=False)
class ControllerSpec:
    """Controller attached to the controlled nodes, listed by 0-based network index.

    ``comm`` is indexed by position in ``nodes``; ``frozen`` holds fail-mode
    levels that ``resolve`` folds into the network disturbances. A resolved
    controller passes through ``resolve`` unchanged.
    """

    kind: ControllerKind
    nodes: tuple[int, ...] = ()
    m: int = 1
    y_star: np.ndarray | None = None
    levels: np.ndarray | None = None
    weights: tuple[np.ndarray, ...] = ()
    comm: Graph | None = None
    xi0: np.ndarray | None = None
    frozen: Mapping[int, np.ndarray] = field(default_factory=dict)
    resolved: bool = False

    def __post_init__(self) -> None:
        p = len(self.nodes)
        if len(set(self.nodes)) != p:
            raise InvalidModelError("controller lists a node twice")
        if self.kind in ("integral", "distributed"):
            if self.y_star is None:
                raise InvalidModelError(f"{self.kind} controller needs y_star")
            object.__setattr__(self, "y_star", _vector(self.y_star, self.m, "y_star"))
        if self.kind == "constant":
            levels = np.asarray(
                self.levels if self.levels is not None else np.zeros((p, self.m)),
                dtype=np.float64,
            ).reshape(p, self.m)
            object.__setattr__(self, "levels", levels)
        if self.kind == "distributed":
            if len(self.weights) != p:
                raise InvalidModelError(f"distributed controller needs {p} weights Q_i")
            for k, Q in enumerate(self.weights):
                Q = np.atleast_2d(Q)
                if Q.shape != (self.m, self.m):
                    raise InvalidModelError(f"Q for node {self.nodes[k] + 1} must be m x m")
                if not np.allclose(Q, Q.T) or np.min(np.linalg.eigvalsh(Q)) <= 0:
                    raise InvalidModelError(
                        f"Q for node {self.nodes[k] + 1} is not symmetric positive definite"
                    )
            object.__setattr__(
                self, "weights", tuple(np.atleast_2d(np.asarray(Q, float)) for Q in self.weights)
            )
            if self.comm is None or self.comm.num_nodes != p:
                raise InvalidModelError(
                    f"distributed controller needs a communication graph over its {p} nodes"
                )
        if self.xi0 is not None:
            xi0 = np.asarray(self.xi0, dtype=np.float64).reshape(-1)
            if xi0.shape != (self.state_size,):
                raise InvalidModelError(
                    f"xi0 has {xi0.size} entries, controller state has {self.state_size}"
                )
            object.__setattr__(self, "xi0", xi0)
        for node in self.frozen:
            if node not in self.nodes:
                raise InvalidModelError(f"node {node + 1} is frozen but not controlled")
        object.__setattr__(
            self,
            "frozen",
            {
                i: _vector(v, self.m, f"frozen level of node {i + 1}")
                for i, v in self.frozen.items()
            },
        )

    @classmethod
    def none(cls, m: int = 1) -> ControllerSpec:
        return cls(kind="none", m=m)

    @classmethod
    def constant(cls, nodes: Sequence[int], levels: np.ndarray, m: int = 1) -> ControllerSpec:
        return cls(kind="constant", nodes=tuple(nodes), m=m, levels=np.asarray(levels, float))

    @classmethod
    def integral(
        cls,
        nodes: Sequence[int],
        y_star: np.ndarray | Sequence[float],
        m: int = 1,
        xi0: np.ndarray | None = None,
    ) -> ControllerSpec:
        return cls(kind="integral", nodes=tuple(nodes), m=m, y_star=np.asarray(y_star), xi0=xi0)

    @classmethod
    def distributed(
        cls,
        nodes: Sequence[int],
        y_star: np.ndarray | Sequence[float],
        weights: Sequence[np.ndarray],
        comm: Graph,
        m: int = 1,
        xi0: np.ndarray | None = None,
    ) -> ControllerSpec:
        return cls(
            kind="distributed",
            nodes=tuple(nodes),
            m=m,
            y_star=np.asarray(y_star),
            weights=tuple(np.atleast_2d(np.asarray(Q, float)) for Q in weights),
            comm=comm,
            xi0=xi0,
        )

    @property
    def is_dynamic(self) -> bool:
        return self.kind in ("integral", "distributed")

    @property
    def state_size(self) -> int:
        return len(self.nodes) * self.m if self.is_dynamic else 0

    def initial_state(self) -> np.ndarray:
        return self.xi0.copy() if self.xi0 is not None else np.zeros(self.state_size)

    def weight_map(self) -> dict[int, np.ndarray]:
        return dict(zip(self.nodes, self.weights, strict=True))

    def with_xi0(self, xi0: np.ndarray) -> ControllerSpec:
        return replace(self, xi0=np.asarray(xi0, dtype=np.float64))


def freeze(
    c: ControllerSpec, nodes: Sequence[int], levels: Sequence[np.ndarray] | np.ndarray
) -> ControllerSpec:
    """Mark ``nodes`` as failed: they output the constant ``levels`` from now on."""
    nodes = tuple(nodes)
    if not nodes:
        return c
    levels_arr = np.asarray(levels, dtype=np.float64).reshape(len(nodes), c.m)
    for node in nodes:
        if node not in c.nodes:
            raise InvalidModelError(f"node {node + 1} is not controlled and cannot be frozen")
    frozen = {**c.frozen, **{n: levels_arr[k] for k, n in enumerate(nodes)}}
    if set(frozen) == set(c.nodes):
        all_levels = np.stack([frozen[n] for n in c.nodes])
        return ControllerSpec.constant(c.nodes, all_levels, m=c.m)
    return replace(c, frozen=frozen)


def resolve(c: ControllerSpec, network: NetworkSpec) -> tuple[NetworkSpec, ControllerSpec]:
    """Attach ``c`` to ``network``: fold frozen nodes into disturbances and check structure.

    Frozen nodes lose their control class (11 -> 12, 21 -> 22) and their
    level is added to delta; the communication graph is restricted to the
    remaining nodes and must stay connected.
    """
    if c.m != network.m:
        raise InvalidModelError(f"controller port dimension {c.m} != network m = {network.m}")
    if c.kind == "none":
        return network, c
    if c.resolved:
        return network, c

    controlled = set(network.partition.controlled)
    if set(c.nodes) != controlled:
        missing = sorted(i + 1 for i in controlled - set(c.nodes))
        extra = sorted(i + 1 for i in set(c.nodes) - controlled)
        raise InvalidModelError(
            f"controller must attach to every controlled node (missing {missing}, extra {extra})"
        )
    if c.is_dynamic:
        network.require_controlled_class()

    if c.frozen:
        updates = {
            i: network.nodes[i].with_class(
                network.nodes[i].node_class.without_control(), network.nodes[i].delta + level
            )
            for i, level in c.frozen.items()
        }
        network = network.with_nodes(updates)
        log.info("nodes_frozen", nodes=sorted(i + 1 for i in c.frozen))

    keep = [k for k, node in enumerate(c.nodes) if node not in c.frozen]
    active = tuple(c.nodes[k] for k in keep)
    if c.is_dynamic and not network.partition.of(NodeClass.DIFF_CONTROLLED):
        log.warning("no_differential_controlled_nodes", nodes=[i + 1 for i in active])

    if c.kind == "distributed":
        for i in active:
            if not network.nodes[i].has_identity_port:
                raise UnsupportedConfigurationError(
                    f"distributed controller needs G = I at node {i + 1}"
                )

    xi0 = None
    if c.xi0 is not None and c.is_dynamic:
        xi0 = c.xi0.reshape(len(c.nodes), c.m)[keep].reshape(-1)
    resolved = ControllerSpec(
        kind=c.kind,
        nodes=active,
        m=c.m,
        y_star=c.y_star,
        levels=None if c.levels is None else c.levels[keep],
        weights=tuple(c.weights[k] for k in keep) if c.weights else (),
        comm=induced_subgraph(c.comm, keep) if c.comm is not None else None,
        xi0=xi0,
        resolved=True,
    )
    return network, resolved
