"""Microgrid description: buses, lines, communication links and failures.

Sign convention: ``delta`` is the net constant power injection at a bus
(negative for a consuming load). ``gamma`` is the line susceptance weight
Im(Y_ij) * V_i * V_j in per unit, given directly as a positive number.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from phnet.errors import InvalidModelError
from phnet.graph import Graph

BusKind = Literal["generator", "inverter", "load"]


class BusConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: BusKind
    inertia: float | None = Field(None, gt=0, description="M_i, generators only")
    damping: float = Field(..., gt=0, description="A_i")
    delta: float = 0.0
    q: float | None = Field(None, gt=0, description="dispatch weight, actuated buses")
    omega0: float = 0.0

    @model_validator(mode="after")
    def _kind_parameters(self) -> BusConfig:
        if self.kind == "generator" and self.inertia is None:
            raise ValueError("generator bus needs inertia")
        if self.kind != "generator" and self.inertia is not None:
            raise ValueError(f"{self.kind} bus takes no inertia")
        if self.kind == "load" and self.q is not None:
            raise ValueError("load bus is not actuated and takes no q")
        if self.kind != "load" and self.q is None:
            raise ValueError(f"{self.kind} bus needs a dispatch weight q")
        return self

    @property
    def actuated(self) -> bool:
        return self.kind != "load"


class LineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    from_bus: int = Field(..., alias="from", ge=1)
    to_bus: int = Field(..., alias="to", ge=1)
    gamma: float = Field(..., gt=0)
    eta0: float = 0.0


class GridConfig(BaseModel):
    """Buses and lines are numbered from 1 in listing order."""

    model_config = ConfigDict(extra="forbid")

    buses: list[BusConfig] = Field(..., min_length=1)
    lines: list[LineConfig] = Field(default_factory=list)
    comm: list[tuple[int, int]] = Field(default_factory=list)
    failed: dict[int, float] = Field(default_factory=dict)
    xi0: list[float] | None = Field(None, description="one entry per controlled bus")

    @model_validator(mode="after")
    def _topology(self) -> GridConfig:
        n = len(self.buses)
        try:
            self.electrical_graph()
        except InvalidModelError as exc:
            raise ValueError(f"lines: {exc}") from exc
        actuated = set(self.actuated_buses())
        for pair in self.comm:
            for bus in pair:
                if not 1 <= bus <= n or bus not in actuated:
                    raise ValueError(f"comm link {pair} uses bus {bus}, which is not actuated")
        for bus in self.failed:
            if bus not in actuated:
                raise ValueError(f"failed bus {bus} is not actuated")
        if actuated and set(self.failed) >= actuated:
            raise ValueError("every actuated bus is failed; no controller remains")
        if actuated:
            try:
                self.comm_graph()
            except InvalidModelError as exc:
                raise ValueError(f"comm: {exc}") from exc
        return self

    def electrical_graph(self) -> Graph:
        return Graph.from_pairs(len(self.buses), [(ln.from_bus, ln.to_bus) for ln in self.lines])

    def actuated_buses(self) -> list[int]:
        """1-based numbers of generator and inverter buses."""
        return [k + 1 for k, bus in enumerate(self.buses) if bus.actuated]

    def controlled_buses(self) -> list[int]:
        """Actuated buses that have not failed."""
        return [b for b in self.actuated_buses() if b not in self.failed]

    def comm_graph(self) -> Graph:
        """Communication graph over the controlled buses, indexed by position among them.

        Links touching a failed bus are dropped; the rest must stay connected.
        """
        local = {bus: k for k, bus in enumerate(self.controlled_buses())}
        edges = tuple(
            (local[a], local[b]) for a, b in self.comm if a in local and b in local
        )
        return Graph(num_nodes=len(local), edges=edges)
