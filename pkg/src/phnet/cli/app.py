"""Root Typer application with subcommand registration."""

from __future__ import annotations

from typing import Optional

import typer

from phnet import PhnetContext, __version__

app = typer.Typer(
    name="phnet",
    help="phnet: port-Hamiltonian network simulation and steady-state toolkit",
    no_args_is_help=True,
    rich_markup_mode="rich",
)

# Shared state across commands
_ctx = PhnetContext()


def get_context() -> PhnetContext:
    return _ctx


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"phnet {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    config: Optional[str] = typer.Option(None, "--config", "-C", help="Path to phnet.yaml"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
    log_json: bool = typer.Option(False, "--log-json", help="Emit logs as JSON lines on stderr"),
    version: Optional[bool] = typer.Option(
        None, "--version", "-V", callback=_version_callback, is_eager=True
    ),
) -> None:
    """Simulate, check and dispatch port-Hamiltonian networks described by scenario files."""
    from phnet.config.loader import load_config
    from phnet.utils.logging import setup_logging

    _ctx.config = load_config(config)
    _ctx.log_json = log_json or _ctx.config.logging.json_output
    level = "DEBUG" if verbose else _ctx.config.logging.level
    setup_logging(level=level, json_output=_ctx.log_json)


# -- Subcommand registration --
from phnet.cli.check import check_cmd  # noqa: E402
from phnet.cli.dispatch import dispatch_cmd  # noqa: E402
from phnet.cli.probe import probe_cmd  # noqa: E402
from phnet.cli.run import run_cmd  # noqa: E402
from phnet.cli.simulate import simulate_cmd  # noqa: E402
from phnet.cli.validate import validate_cmd  # noqa: E402

app.command(name="check")(check_cmd)
app.command(name="simulate")(simulate_cmd)
app.command(name="dispatch")(dispatch_cmd)
app.command(name="validate")(validate_cmd)
app.command(name="probe")(probe_cmd)
app.command(name="run")(run_cmd)
