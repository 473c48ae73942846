"""Configuration for bloch_verifier."""

from .settings import Settings, settings

__all__ = ["Settings", "settings"]
