"""Command-line front end.

Subcommands run batch sections from one JSON config file; `serve` starts
the HTTP service. Output directory precedence: --out flag, then the
ECOINDEX_OUT environment variable, then the config's output_dir, then
./ecoindex-out.
"""

from __future__ import annotations

import sys

import click

from . import __version__, runner

_CONFIG = click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(dir_okay=False),
    help="JSON run configuration.",
)
_OUT = click.option("--out", "out", default=None, type=click.Path(file_okay=False), help="Output directory.")
_FORMAT = click.option(
    "--format",
    "fmt",
    default=None,
    type=click.Choice(["csv", "json"]),
    help="Restrict artifact output to one format.",
)


@click.group()
@click.version_option(version=__version__, prog_name="ecoindex")
def main() -> None:
    """Environmental-quality assessment runs: weights, indices, carbon, planning."""


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def weights(config_path: str, out: str | None, fmt: str | None) -> None:
    """Derive weights from configured judgment matrices and gate on consistency."""
    sys.exit(runner.cmd_weights(config_path, out, fmt))


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def index(config_path: str, out: str | None, fmt: str | None) -> None:
    """Evaluate configured composite indices (EI, H, H_expanded, EH)."""
    sys.exit(runner.cmd_index(config_path, out, fmt))


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def carbon(config_path: str, out: str | None, fmt: str | None) -> None:
    """Build the forest carbon-stock ledger."""
    sys.exit(runner.cmd_carbon(config_path, out, fmt))


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def plan(config_path: str, out: str | None, fmt: str | None) -> None:
    """Reserve-sizing arithmetic: unit-area effect and required area."""
    sys.exit(runner.cmd_plan(config_path, out, fmt))


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def sensitivity(config_path: str, out: str | None, fmt: str | None) -> None:
    """Perturbation report for the expanded hazard form."""
    sys.exit(runner.cmd_sensitivity(config_path, out, fmt))


@main.command()
@_CONFIG
@_OUT
@_FORMAT
def report(config_path: str, out: str | None, fmt: str | None) -> None:
    """Run every configured section into one directory with a manifest."""
    sys.exit(runner.cmd_report(config_path, out, fmt))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Start the HTTP service wrapping the core functions."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
