"""Rich progress display for basin probes."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from contextlib import contextmanager

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)

from phnet.utils.formatters import err_console


def create_progress(disable: bool = False) -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("[green]{task.fields[settled]} settled[/green]"),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
        disable=disable,
    )


@contextmanager
def probe_progress(
    radius: float, trials: int, enabled: bool = True
) -> Iterator[Callable[[bool], None]]:
    """Yield ``record(settled)``, to be called once per finished trial."""
    progress = create_progress(disable=not enabled)
    settled = 0
    with progress:
        task = progress.add_task(f"Probing r={radius:g}", total=trials, settled=0)

        def record(ok: bool) -> None:
            nonlocal settled
            settled += ok
            progress.update(task, advance=1, settled=settled)

        yield record
