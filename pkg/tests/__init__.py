"""Tests for the energy-dd package."""
