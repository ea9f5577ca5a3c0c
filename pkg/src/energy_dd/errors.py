"""Error types for energy-dd.

This module defines the error types raised by the discretizations, the
domain-decomposition drivers and the configuration layer. A diverging
iteration is a studied outcome and is reported through a verdict, never
through an exception.
"""

from typing import Any, Optional


class EnergyDDError(Exception):
    """Base class for all energy-dd errors.

    This is the parent class for all package-specific exceptions.
    """

    pass


class ConfigurationError(EnergyDDError):
    """Base class for configuration-related errors.

    This is raised for errors related to configuration loading, parsing,
    or validation.
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        """Initialize configuration error.

        Args:
            message: Error message
            path: Optional path to the configuration file that caused the error
        """
        super().__init__(message)
        self.message = message
        self.path = path


class ConfigFileNotFoundError(ConfigurationError):
    """Raised when a requested configuration file does not exist.

    Examples:
        >>> try:
        ...     read_config_file("missing.conf")
        ... except ConfigFileNotFoundError as e:
        ...     print(f"Config file not found: {e.path}")
    """

    pass


class InvalidConfigFormatError(ConfigurationError):
    """Raised when a configuration file cannot be parsed.

    Examples:
        >>> try:
        ...     read_config_file("broken.conf")
        ... except InvalidConfigFormatError as e:
        ...     print(f"{e.path}:{e.line}: {e}")
    """

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        key: Optional[str] = None,
    ) -> None:
        """Initialize invalid format error.

        Args:
            message: Error message
            path: Optional path to the configuration file
            line: Line number of the offending entry, if known
            key: Offending key, if known
        """
        super().__init__(message, path)
        self.line = line
        self.key = key


class ParameterValidationError(EnergyDDError):
    """Base class for parameter validation errors.

    This is raised when a run or solver parameter has an invalid value.
    """

    def __init__(self, message: str, param_name: str, value: Any) -> None:
        """Initialize parameter validation error.

        Args:
            message: Error message
            param_name: The name of the parameter being validated
            value: The value that failed validation
        """
        super().__init__(message)
        self.message = message
        self.param_name = param_name
        self.value = value


class ConstraintViolation(ParameterValidationError):
    """Raised when a parameter value violates a declared constraint.

    Examples:
        >>> try:
        ...     settings.validate("nu", -1.0)
        ... except ConstraintViolation as e:
        ...     print(f"Constraint violated: {e.param} must {e.rule}")
    """

    def __init__(self, param: str, value: Any, rule: str) -> None:
        """Initialize constraint violation error.

        Args:
            param: Parameter name that violated the constraint
            value: The invalid value
            rule: Description of the constraint rule
        """
        message = f"{param} must {rule} (got {value})"
        super().__init__(message, param, value)
        self.param = param
        self.rule = rule


class UnknownParameterError(ParameterValidationError):
    """Raised when a configuration entry names a parameter that does not exist.

    Examples:
        >>> try:
        ...     normalize_config_key("thetta")
        ... except UnknownParameterError as e:
        ...     print(f"Unknown key: {e.param_name}")
    """

    def __init__(self, param_name: str) -> None:
        """Initialize unknown parameter error.

        Args:
            param_name: The unrecognized parameter name
        """
        super().__init__(f"unknown parameter '{param_name}'", param_name, None)


class MeshError(EnergyDDError):
    """Raised when a uniform mesh cannot be built."""

    def __init__(self, message: str, n_cells: Optional[int] = None) -> None:
        """Initialize mesh error.

        Args:
            message: Error message
            n_cells: The requested number of cells
        """
        super().__init__(message)
        self.message = message
        self.n_cells = n_cells


class DecompositionError(EnergyDDError):
    """Raised when an interface is not grid-aligned or leaves a subdomain too thin.

    Examples:
        >>> try:
        ...     Decomposition.from_alpha(Mesh1D(100), 0.3333333333)
        ... except DecompositionError as e:
        ...     print(e.alpha)
    """

    def __init__(self, message: str, m: Optional[int] = None, alpha: Optional[float] = None) -> None:
        """Initialize decomposition error.

        Args:
            message: Error message
            m: Interface node index, if known
            alpha: Requested interface position, if known
        """
        super().__init__(message)
        self.message = message
        self.m = m
        self.alpha = alpha


class ProblemDefinitionError(EnergyDDError):
    """Raised when a control problem is ill-posed (ν ≤ 0, κ ≤ 0, non-finite data)."""

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        """Initialize problem definition error.

        Args:
            message: Error message
            field: Name of the offending problem field
        """
        super().__init__(message)
        self.message = message
        self.field = field


class MeshMismatchError(EnergyDDError):
    """Raised when fields defined on different meshes or subdomain sides are combined."""

    pass


class GridDataError(EnergyDDError):
    """Raised when a grid-function CSV file cannot be ingested.

    Examples:
        >>> try:
        ...     read_grid_csv("target.csv", Mesh1D(64))
        ... except GridDataError as e:
        ...     print(f"Bad grid data in {e.path}: {e}")
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        """Initialize grid data error.

        Args:
            message: Error message
            path: Optional path of the CSV file
        """
        super().__init__(message)
        self.message = message
        self.path = path


class SolverError(EnergyDDError):
    """Raised when a direct factorization fails."""

    pass
