"""energy-dd CLI package."""

# Import guard for CLI dependencies
try:
    from .app import app, parse_args
except ImportError as e:
    if "CLI dependencies not available" in str(e):
        raise
    # Re-raise with helpful message if it's a different import error
    raise ImportError("CLI dependencies not available. Install with: pip install energy-dd[cli]") from e

__all__ = ["app", "parse_args"]
