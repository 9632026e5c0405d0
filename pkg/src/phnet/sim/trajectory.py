"""Sampled closed-loop trajectories and their CSV export."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from phnet.config.defaults import CSV_FLOAT_FORMAT
from phnet.network import NetworkSpec

MONITOR_COLUMNS = ("V", "W_n", "W_e", "W_c", "alg_residual", "domain_margin")


@dataclass(frozen=True)
class ExitEvent:
    """Why an integration stopped before t_end."""

    t: float
    kind: str
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"t": self.t, "kind": self.kind, "detail": self.detail}


@dataclass
class Trajectory:
    times: np.ndarray
    eta: np.ndarray
    x1: np.ndarray
    xi: np.ndarray
    y: np.ndarray
    u: np.ndarray
    labels: dict[str, list[str]]
    monitors: dict[str, np.ndarray] = field(default_factory=dict)
    exit_event: ExitEvent | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def m(self) -> int:
        return int(self.metadata.get("m", 1))

    def outputs(self, k: int) -> np.ndarray:
        """Sample k of y as an (N, m) array."""
        return self.y[k].reshape(-1, self.m)

    def inputs(self, k: int) -> np.ndarray:
        return self.u[k].reshape(-1, self.m)

    @property
    def completed(self) -> bool:
        return self.exit_event is None

    def columns(self) -> list[str]:
        return [
            "t",
            *self.labels["eta"],
            *self.labels["x"],
            *self.labels["xi"],
            *self.labels["y"],
            *self.labels["u"],
            *MONITOR_COLUMNS,
        ]

    def table(self) -> np.ndarray:
        k = len(self)
        monitors = [
            self.monitors.get(name, np.full(k, np.nan)).reshape(k, 1) for name in MONITOR_COLUMNS
        ]
        return np.hstack(
            [self.times.reshape(k, 1), self.eta, self.x1, self.xi, self.y, self.u, *monitors]
        )

    def to_csv(self, path: str | Path, float_format: str = CSV_FLOAT_FORMAT) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(
            path,
            self.table(),
            delimiter=",",
            header=",".join(self.columns()),
            comments="",
            fmt=float_format,
        )
        return path


def _names(prefix: str, owners: list[int], dim: int) -> list[str]:
    if dim == 1:
        return [f"{prefix}_{o}" for o in owners]
    return [f"{prefix}_{o}_{c + 1}" for o in owners for c in range(dim)]


def column_labels(
    network: NetworkSpec, controlled: tuple[int, ...], xi_size: int
) -> dict[str, list[str]]:
    """Column names keyed by block; nodes and edges are 1-based."""
    m = network.m
    x_labels: list[str] = []
    for i in network.layout.node_slices:
        x_labels.extend(_names("x", [i + 1], network.nodes[i].n))
    nodes = list(range(1, network.num_nodes + 1))
    return {
        "eta": _names("eta", list(range(1, network.num_edges + 1)), m),
        "x": x_labels,
        "xi": _names("xi", [i + 1 for i in controlled], m) if xi_size else [],
        "y": _names("y", nodes, m),
        "u": _names("u", nodes, m),
    }
