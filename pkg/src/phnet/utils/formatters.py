"""Rich output formatters for CLI display."""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from typing import Any

import numpy as np
from rich.console import Console
from rich.table import Table

console = Console()
err_console = Console(stderr=True)


def to_jsonable(obj: Any) -> Any:
    """Convert numpy containers and non-finite floats into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, float | np.floating):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps(data: Any) -> str:
    """Byte-stable JSON rendering (sorted keys, fixed indentation)."""
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + "\n"


def format_value(value: Any) -> str:
    """Short human form of report values: 6 significant digits, lists inline."""
    if isinstance(value, bool | np.bool_):
        return "yes" if value else "no"
    if isinstance(value, float | np.floating):
        return f"{float(value):.6g}"
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, list | tuple):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


def print_summary(title: str, rows: Sequence[tuple[str, Any]]) -> None:
    """Two-column item/value table; failed checks are highlighted."""
    table = Table(title=title, show_header=False, box=None, pad_edge=False)
    table.add_column("item", style="cyan", no_wrap=True)
    table.add_column("value", overflow="fold")
    for item, value in rows:
        text = format_value(value)
        table.add_row(item, f"[red]{text}[/red]" if text.startswith("FAIL") else text)
    console.print(table)


def print_json(data: Any) -> None:
    console.print_json(dumps(data))


def print_success(msg: str) -> None:
    console.print(f"[bold green]{msg}[/bold green]")


def print_error(msg: str) -> None:
    err_console.print(f"[bold red]Error:[/bold red] {msg}")


def print_warning(msg: str) -> None:
    err_console.print(f"[bold yellow]Warning:[/bold yellow] {msg}")
