"""Shared fixtures for the energy-dd tests."""

from pathlib import Path
from typing import Generator

import pytest

from energy_dd.settings import get_settings


@pytest.fixture(autouse=True)
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Generator[Path, None, None]:
    """Keep user configuration files and environment overrides out of the tests."""
    config_dir = tmp_path / "user-config"
    monkeypatch.delenv("EDD_CONFIG_PATH", raising=False)
    monkeypatch.delenv("EDD_DEFAULTS_PATH", raising=False)
    monkeypatch.setattr("energy_dd.config_paths.platformdirs.user_config_dir", lambda *_: str(config_dir))
    get_settings.cache_clear()
    yield config_dir
    get_settings.cache_clear()
