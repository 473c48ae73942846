"""Command-line surface of bloch_verifier."""

from .main import cli, configure_logging, main

__all__ = ["cli", "configure_logging", "main"]
