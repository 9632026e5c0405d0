"""Allow `python -m phnet`."""

from phnet.cli.app import app

app()
