"""Pydantic schema of the v1 scenario file.

Node and edge numbers are 1-based everywhere in the file. Matrices may be
written as nested lists or, for 1x1 blocks, as plain numbers.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from phnet.config.defaults import DEFAULT_SEED, SCENARIO_SCHEMA_VERSION
from phnet.microgrid.config import GridConfig

Matrix = float | list[list[float]]
Vector = float | list[float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class MetaSection(_Strict):
    name: str
    seed: int = DEFAULT_SEED
    description: str = ""


class HamiltonianConfig(BaseModel):
    """``family`` plus the family's parameters; extra keys go to the family builder."""

    model_config = ConfigDict(extra="allow")

    family: str

    @model_validator(mode="after")
    def _builtin_parameters(self) -> HamiltonianConfig:
        params = self.model_extra or {}
        if self.family == "neg_cosine":
            gamma = params.get("gamma")
            values = gamma if isinstance(gamma, list) else [gamma]
            if gamma is None or not all(isinstance(g, int | float) and g > 0 for g in values):
                raise ValueError("neg_cosine needs gamma > 0 for every coordinate")
        elif self.family == "quadratic" and "P" not in params:
            raise ValueError("quadratic needs a matrix P")
        return self

    def params(self) -> dict[str, Any]:
        return {"family": self.family, **(self.model_extra or {})}


class EdgeEntry(_Strict):
    from_node: int = Field(..., alias="from", ge=1)
    to_node: int = Field(..., alias="to", ge=1)
    H: HamiltonianConfig
    eta0: Vector = 0.0


class GraphSection(_Strict):
    num_nodes: int = Field(..., ge=1)
    edges: list[EdgeEntry] = Field(default_factory=list)


class NodeEntry(_Strict):
    node_class: Literal[11, 12, 21, 22] = Field(..., alias="class")
    J: Matrix = 0.0
    R: Matrix
    G: Matrix = 1.0
    H: HamiltonianConfig
    delta: Vector = 0.0
    x0: Vector | None = None


class ControllerSection(_Strict):
    kind: Literal["none", "constant", "integral", "distributed"] = "none"
    nodes: list[int] | None = Field(None, description="defaults to every controlled node")
    y_star: Vector | None = None
    levels: list[Vector] | None = None
    Q: list[Matrix] | None = None
    comm: list[tuple[int, int]] | None = None
    xi0: list[float] | None = None
    frozen: dict[int, Vector] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _kind_fields(self) -> ControllerSection:
        if self.kind in ("integral", "distributed") and self.y_star is None:
            raise ValueError(f"{self.kind} controller needs y_star")
        if self.kind == "distributed" and (self.Q is None or self.comm is None):
            raise ValueError("distributed controller needs Q and comm")
        if self.kind == "constant" and self.levels is None:
            raise ValueError("constant controller needs levels")
        return self


class IntegratorSection(_Strict):
    """Scenario-level overrides of the toolkit integrator defaults."""

    method: Literal["rk4_fixed", "dp45_adaptive"] | None = None
    step: float | None = Field(None, gt=0)
    rel_tol: float | None = Field(None, gt=0, le=1e-2)
    abs_tol: float | None = Field(None, gt=0, le=1e-2)
    max_step: float | None = Field(None, gt=0)
    t_end: float | None = Field(None, gt=0)
    record_stride: int | None = Field(None, ge=1)


class Experiment(_Strict):
    command: Literal["check", "simulate", "dispatch", "validate", "probe"]
    params: dict[str, Any] = Field(default_factory=dict)


class ScenarioFile(_Strict):
    version: str
    meta: MetaSection
    graph: GraphSection | None = None
    nodes: list[NodeEntry] | None = None
    grid: GridConfig | None = None
    controller: ControllerSection | None = None
    integrator: IntegratorSection = Field(default_factory=IntegratorSection)
    experiments: list[Experiment] = Field(default_factory=list)

    @field_validator("version")
    @classmethod
    def _known_version(cls, value: str) -> str:
        if value != SCENARIO_SCHEMA_VERSION:
            raise ValueError(f"unsupported scenario version {value!r}")
        return value

    @model_validator(mode="after")
    def _one_form(self) -> ScenarioFile:
        if (self.nodes is None) == (self.grid is None):
            raise ValueError("exactly one of 'nodes' and 'grid' must be present")
        if self.nodes is not None:
            if self.graph is None:
                raise ValueError("'nodes' form needs a 'graph' section")
            if len(self.nodes) != self.graph.num_nodes:
                raise ValueError(
                    f"graph has {self.graph.num_nodes} nodes but {len(self.nodes)} are listed"
                )
        else:
            if self.graph is not None:
                raise ValueError("'grid' form takes its topology from grid.lines; drop 'graph'")
            if self.controller is not None:
                raise ValueError("'grid' form builds its own controller; drop 'controller'")
        return self

    @property
    def is_grid(self) -> bool:
        return self.grid is not None
