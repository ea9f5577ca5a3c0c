"""Parameter constraints for energy-dd.

This module defines the constraint types used to validate run parameters
(regularization weight, relaxation parameter, tolerances, mesh sizes).
"""

import math
from typing import Any, List, Optional

from .errors import ConstraintViolation


class NumericConstraint:
    """Constraint for numeric parameters."""

    def __init__(
        self,
        min_value: Optional[float] = None,
        max_value: Optional[float] = None,
        allow_float: bool = True,
        allow_int: bool = True,
        exclusive_min: bool = False,
        description: str = "",
    ):
        """Initialize numeric constraint.

        Args:
            min_value: Minimum allowed value, or None for no lower limit
            max_value: Maximum allowed value, or None for no upper limit
            allow_float: Whether floating point values are allowed
            allow_int: Whether integer values are allowed
            exclusive_min: Whether the minimum itself is excluded
            description: Description of the parameter
        """
        self.min_value = min_value
        self.max_value = max_value
        self.allow_float = allow_float
        self.allow_int = allow_int
        self.exclusive_min = exclusive_min
        self.description = description

    def rule(self) -> str:
        """Describe the accepted range in words."""
        kind = "an integer" if not self.allow_float else "a number"
        parts = [f"be {kind}"]
        if self.min_value is not None:
            op = ">" if self.exclusive_min else ">="
            parts.append(f"{op} {self.min_value:g}")
        if self.max_value is not None:
            parts.append(f"<= {self.max_value:g}")
        return " ".join(parts)

    def validate(self, name: str, value: Any) -> None:
        """Validate a value against this constraint.

        Args:
            name: Parameter name for error messages
            value: Value to validate

        Raises:
            ConstraintViolation: If validation fails
        """
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConstraintViolation(name, value, self.rule())

        if isinstance(value, float) and not self.allow_float and not value.is_integer():
            raise ConstraintViolation(name, value, self.rule())
        if isinstance(value, int) and not self.allow_int:
            raise ConstraintViolation(name, value, self.rule())

        # NaN compares false against every bound
        if isinstance(value, float) and not math.isfinite(value):
            raise ConstraintViolation(name, value, "be finite")

        if self.min_value is not None:
            too_small = value <= self.min_value if self.exclusive_min else value < self.min_value
            if too_small:
                raise ConstraintViolation(name, value, self.rule())
        if self.max_value is not None and value > self.max_value:
            raise ConstraintViolation(name, value, self.rule())


class EnumConstraint:
    """Constraint for enumerated parameters."""

    def __init__(
        self,
        allowed_values: List[str],
        description: str = "",
    ):
        """Initialize enum constraint.

        Args:
            allowed_values: List of allowed string values
            description: Description of the parameter
        """
        self.allowed_values = allowed_values
        self.description = description

    def rule(self) -> str:
        """Describe the accepted values in words."""
        return f"be one of {', '.join(sorted(self.allowed_values))}"

    def validate(self, name: str, value: Any) -> None:
        """Validate a value against this constraint.

        Args:
            name: Parameter name for error messages
            value: Value to validate

        Raises:
            ConstraintViolation: If validation fails
        """
        if not isinstance(value, str) or value not in self.allowed_values:
            raise ConstraintViolation(name, value, self.rule())
