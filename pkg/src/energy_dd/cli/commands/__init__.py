"""CLI commands package."""

# Import all command modules to make them available
from . import dn, nn, solve, sweep, theory

__all__ = ["solve", "dn", "nn", "theory", "sweep"]
