"""CLI formatters package."""

from .table import create_console, format_reports_table

__all__ = ["create_console", "format_reports_table"]
