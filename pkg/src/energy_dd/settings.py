"""Bundled parameter constraints, iteration defaults and run configuration files.

Constraints and defaults live in ``config/defaults.yml`` and are loaded once
per process. Run configuration files are flat ``key = value`` text (``#``
starts a comment); files ending in ``.yml``/``.yaml`` are read as a flat YAML
mapping instead.
"""

import functools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .config_paths import get_defaults_path
from .constraints import EnumConstraint, NumericConstraint
from .errors import (
    ConfigFileNotFoundError,
    InvalidConfigFormatError,
    UnknownParameterError,
)
from .logging import LogEvent, log_debug, log_error


# Keys a run configuration file may set, keyed by their normalized spelling.
RUN_CONFIG_KEYS = frozenset(
    {
        "nu",
        "n_cells",
        "m",
        "alpha",
        "theta",
        "method",
        "reg",
        "dim",
        "mode_k",
        "iters",
        "tol",
        "trace0",
        "seed",
        "scan_k",
        "out",
        "jobs",
        "target",
        "kappa",
        "symbol",
        "swap",
        "field",
        "guard",
    }
)

_KEY_ALIASES = {"n": "n_cells", "max_iter": "iters", "divergence_guard": "guard", "k_scan": "scan_k"}


@dataclass
class ConfigResult:
    """Outcome of loading a YAML configuration document.

    Attributes:
        success: Whether the document was read and parsed
        data: Parsed mapping (if successful)
        error: Error message (if unsuccessful)
        exception: Original exception (if an error occurred)
        path: Path of the document
    """

    success: bool
    data: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    exception: Optional[Exception] = None
    path: Optional[str] = None


@dataclass
class Settings:
    """Parameter constraints and iteration defaults."""

    constraints: Dict[str, Union[NumericConstraint, EnumConstraint]] = field(default_factory=dict)
    defaults: Dict[str, Any] = field(default_factory=dict)
    path: Optional[str] = None

    def validate(self, name: str, value: Any) -> None:
        """Validate ``value`` against the constraint declared for ``name``.

        Parameters without a declared constraint are accepted as-is.

        Raises:
            ConstraintViolation: If the value is out of range
        """
        constraint = self.constraints.get(name)
        if constraint is not None:
            constraint.validate(name, value)

    def default(self, name: str) -> Any:
        """Return the configured default for ``name``."""
        return self.defaults[name]


def load_settings(path: Optional[str] = None) -> ConfigResult:
    """Read the defaults YAML document.

    Args:
        path: Explicit path; the resolved defaults path when omitted

    Returns:
        ConfigResult holding the raw mapping or the failure
    """
    path = path or get_defaults_path()
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        return ConfigResult(success=False, error=f"defaults file not found: {path}", exception=e, path=path)
    except yaml.YAMLError as e:
        return ConfigResult(success=False, error=f"invalid YAML in {path}: {e}", exception=e, path=path)

    if not isinstance(data, dict):
        return ConfigResult(success=False, error=f"{path} must contain a mapping", path=path)
    return ConfigResult(success=True, data=data, path=path)


def build_settings(result: ConfigResult) -> Settings:
    """Turn a loaded defaults document into a :class:`Settings`.

    Raises:
        InvalidConfigFormatError: If the document failed to load or is malformed
    """
    if not result.success or result.data is None:
        log_error(LogEvent.CONFIG, "Failed to load defaults", path=result.path, error=result.error)
        raise InvalidConfigFormatError(result.error or "defaults could not be loaded", result.path)

    constraints: Dict[str, Union[NumericConstraint, EnumConstraint]] = {}
    try:
        for name, spec in (result.data.get("numeric_constraints") or {}).items():
            constraints[name] = NumericConstraint(**spec)
        for name, spec in (result.data.get("enum_constraints") or {}).items():
            constraints[name] = EnumConstraint(
                allowed_values=[str(v) for v in spec["allowed_values"]],
                description=spec.get("description", ""),
            )
    except (TypeError, KeyError, AttributeError) as e:
        raise InvalidConfigFormatError(f"malformed constraint entry: {e}", result.path)

    defaults = dict(result.data.get("iteration_defaults") or {})
    log_debug(LogEvent.CONFIG, "Loaded parameter defaults", path=result.path, n_constraints=len(constraints))
    return Settings(constraints=constraints, defaults=defaults, path=result.path)


@functools.lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings, loading them on first use."""
    return build_settings(load_settings())


def normalize_config_key(key: str) -> str:
    """Map a configuration key to its canonical parameter name.

    ``-`` and ``_`` are interchangeable, keys are case-insensitive and a few
    aliases (``N``, ``max_iter``) are recognized.

    Raises:
        UnknownParameterError: If the key names no run parameter
    """
    normalized = key.strip().lower().replace("-", "_")
    normalized = _KEY_ALIASES.get(normalized, normalized)
    if normalized not in RUN_CONFIG_KEYS:
        raise UnknownParameterError(key.strip())
    return normalized


def read_run_config(path: Union[str, Path]) -> Dict[str, str]:
    """Read a run configuration file.

    Args:
        path: Path to a flat ``key = value`` file or a flat YAML mapping

    Returns:
        Mapping from canonical parameter name to its textual value

    Raises:
        ConfigFileNotFoundError: If the file does not exist
        InvalidConfigFormatError: If a line or key is malformed
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigFileNotFoundError(f"config file not found: {path}", str(path))

    text = path.read_text(encoding="utf-8")
    if path.suffix in (".yml", ".yaml"):
        return _read_yaml_config(text, str(path))

    entries: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(" #", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfigFormatError(f"{path}:{lineno}: expected 'key = value'", str(path), line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise InvalidConfigFormatError(f"{path}:{lineno}: missing key", str(path), line=lineno)
        try:
            entries[normalize_config_key(key)] = value
        except UnknownParameterError:
            raise InvalidConfigFormatError(
                f"{path}:{lineno}: unknown key '{key}'", str(path), line=lineno, key=key
            )
    log_debug(LogEvent.CONFIG, "Read run configuration", path=str(path), keys=sorted(entries))
    return entries


def _read_yaml_config(text: str, path: str) -> Dict[str, str]:
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise InvalidConfigFormatError(f"invalid YAML in {path}: {e}", path)
    if not isinstance(data, dict):
        raise InvalidConfigFormatError(f"{path} must contain a flat mapping", path)

    entries: Dict[str, str] = {}
    for key, value in data.items():
        try:
            name = normalize_config_key(str(key))
        except UnknownParameterError:
            raise InvalidConfigFormatError(f"{path}: unknown key '{key}'", path, key=str(key))
        if isinstance(value, (list, tuple)):
            entries[name] = ",".join(str(v) for v in value)
        elif isinstance(value, (dict, type(None))):
            raise InvalidConfigFormatError(f"{path}: '{key}' must be a scalar or a list", path, key=str(key))
        else:
            entries[name] = str(value)
    return entries
