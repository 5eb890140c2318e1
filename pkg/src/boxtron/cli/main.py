"""This file implements the boxtron cli.

It registers the subcommands of boxtron.
"""
import click

from .admm import admm_cli
from .bench import bench_cli


@click.group("boxtron")
def cli():
    """Batch trust-region Newton solver and ACOPF ADMM driver."""


cli.add_command(bench_cli)
cli.add_command(admm_cli)
if __name__ == "__main__":
    cli()
