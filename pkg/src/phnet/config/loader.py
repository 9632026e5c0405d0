"""Locate ``phnet.yaml``, expand ``${VAR:default}`` references and validate."""

from __future__ import annotations

import os
import re
from collections.abc import Iterator
from pathlib import Path
from typing import Any

import yaml

from phnet.config.defaults import CONFIG_ENV_VAR, CONFIG_FILE_NAMES, CONFIG_SEARCH_PATHS
from phnet.config.models import PhnetConfig

_ENV_REF = re.compile(r"\$\{(\w+)(?::([^}]*))?\}")


def _interpolate_env(value: str) -> str:
    """Replace ${VAR} or ${VAR:default}; an unset VAR without default becomes ''."""
    return _ENV_REF.sub(lambda m: os.environ.get(m.group(1), m.group(2) or ""), value)


def _expand(node: Any) -> Any:
    match node:
        case str():
            return _interpolate_env(node)
        case dict():
            return {key: _expand(value) for key, value in node.items()}
        case list():
            return [_expand(item) for item in node]
    return node


def candidate_paths() -> Iterator[Path]:
    """``$PHNET_CONFIG_FILE`` first, then every name in every search directory."""
    if env_path := os.environ.get(CONFIG_ENV_VAR):
        yield Path(env_path).expanduser()
    for directory in CONFIG_SEARCH_PATHS:
        for name in CONFIG_FILE_NAMES:
            yield directory.expanduser() / name


def find_config_file(explicit_path: str | Path | None = None) -> Path | None:
    if explicit_path is not None:
        path = Path(explicit_path).expanduser()
        return path if path.is_file() else None
    return next((p for p in candidate_paths() if p.is_file()), None)


def load_config(path: str | Path | None = None) -> PhnetConfig:
    """Load and validate the toolkit configuration, falling back to defaults.

    Keys in the file win over ``PHNET_<SECTION>__<KEY>`` environment
    variables, which win over built-in defaults.
    """
    config_path = find_config_file(path)
    if config_path is None:
        return PhnetConfig()
    raw = yaml.safe_load(config_path.read_text()) or {}
    return PhnetConfig.model_validate(_expand(raw))
