"""Configuration path handling for energy-dd.

Run configuration files follow the XDG Base Directory Specification: an
explicit ``$EDD_CONFIG_PATH`` wins, then ``energy-dd.conf`` in the user
config directory. Parameter constraints and iteration defaults ship with
the package and may be overridden the same way.
"""

import os
from pathlib import Path
from typing import Optional

import platformdirs

# Application name used for directory paths
APP_NAME = "energy-dd"

# Environment variable names
ENV_RUN_CONFIG = "EDD_CONFIG_PATH"
ENV_DEFAULTS = "EDD_DEFAULTS_PATH"

# Default filenames
RUN_CONFIG_FILENAME = "energy-dd.conf"
DEFAULTS_FILENAME = "defaults.yml"


def get_package_config_dir() -> Path:
    """Get the path to the package's config directory."""
    return Path(__file__).parent / "config"


def get_user_config_dir() -> Path:
    """Get the path to the user's config directory for this application."""
    return Path(platformdirs.user_config_dir(APP_NAME))


def get_run_config_path() -> Optional[Path]:
    """Locate the implicit run configuration file.

    Returns:
        Path of the first existing candidate, or None when no implicit
        configuration file exists
    """
    # 1. Check environment variable
    env_path = os.environ.get(ENV_RUN_CONFIG)
    if env_path and Path(env_path).is_file():
        return Path(env_path)

    # 2. Check user config directory
    user_path = get_user_config_dir() / RUN_CONFIG_FILENAME
    if user_path.is_file():
        return user_path

    return None


def get_defaults_path() -> str:
    """Get the path to the parameter defaults file.

    Returns:
        Path to the defaults YAML, falling back to the bundled copy
    """
    env_path = os.environ.get(ENV_DEFAULTS)
    if env_path and Path(env_path).is_file():
        return env_path

    user_path = get_user_config_dir() / DEFAULTS_FILENAME
    if user_path.is_file():
        return str(user_path)

    return str(get_package_config_dir() / DEFAULTS_FILENAME)
