"""phnet: port-Hamiltonian network simulation and steady-state toolkit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from phnet.version import __version__

if TYPE_CHECKING:
    from phnet.config.models import PhnetConfig


@dataclass
class PhnetContext:
    """Dependency-injection container shared across CLI commands."""

    config: PhnetConfig | None = None
    log_json: bool = False

    def ensure_config(self) -> PhnetConfig:
        if self.config is None:
            from phnet.config.loader import load_config

            self.config = load_config()
        return self.config


__all__ = ["PhnetContext", "__version__"]
