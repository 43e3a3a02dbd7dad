"""Entry point for running cocart as a module."""

from cocart.cli.main import cli

if __name__ == "__main__":
    cli()
