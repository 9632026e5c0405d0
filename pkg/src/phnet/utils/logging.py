"""Structured logging setup using structlog.

Solvers log numpy scalars and small arrays as event values; they are turned
into plain floats and lists before rendering so JSON lines stay parseable.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import MutableMapping
from typing import Any

import numpy as np
import structlog

_ARRAY_LOG_LIMIT = 16


def _numpy_values(
    _logger: Any, _method: str, event: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    for key, value in event.items():
        if isinstance(value, np.generic):
            event[key] = value.item()
        elif isinstance(value, np.ndarray):
            if value.size <= _ARRAY_LOG_LIMIT:
                event[key] = value.tolist()
            else:
                event[key] = f"<array shape={value.shape} max|.|={np.max(np.abs(value)):.3g}>"
    return event


def _renderer(json_output: bool) -> structlog.types.Processor:
    if json_output:
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())


def setup_logging(level: str = "INFO", json_output: bool = False) -> None:
    """Route structlog and stdlib records (numpy warnings included) to stderr."""
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            _numpy_values,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            foreign_pre_chain=[structlog.stdlib.add_log_level],
            processors=[
                structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                _renderer(json_output),
            ],
        )
    )

    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    # Overflow and invalid-value RuntimeWarnings from numpy.
    logging.captureWarnings(True)


def bind_run(**context: Any) -> None:
    """Attach run-wide context (scenario name, hash, command) to every log event."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**context)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)
