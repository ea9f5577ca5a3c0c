"""The elliptic control problem: regularization weight, conductivity and target state.

Targets are sampled at the mesh nodes, either from a built-in family or from
a grid-function CSV file; the conductivity is piecewise constant per cell.
"""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .errors import ProblemDefinitionError
from .gridio import read_grid_csv
from .mesh import Decomposition, FloatArray, GridFunction, Mesh

TARGET_FAMILIES = ("zero", "bump", "sine")

TargetSpec = Union[str, Path, FloatArray, GridFunction, Callable[..., FloatArray]]
KappaSpec = Union[None, float, str, FloatArray]


@dataclass(frozen=True)
class Problem:
    """Control problem ``min 1/2 |y - yhat|^2 + nu/2 |u|^2`` subject to ``-div(kappa grad y) = u``.

    Attributes:
        nu: Regularization weight
        kappa: Conductivity per cell, shape ``mesh.cell_shape``
        target: Target state sampled at the nodes
    """

    nu: float
    kappa: FloatArray
    target: GridFunction

    def __post_init__(self) -> None:
        nu = float(self.nu)
        if not np.isfinite(nu) or nu <= 0.0:
            raise ProblemDefinitionError(f"nu must be positive and finite, got {self.nu!r}", "nu")
        kappa = np.asarray(self.kappa, dtype=float)
        if kappa.shape != self.mesh.cell_shape:
            raise ProblemDefinitionError(
                f"kappa has shape {kappa.shape}, expected one value per cell {self.mesh.cell_shape}", "kappa"
            )
        if not np.all(np.isfinite(kappa)) or np.any(kappa <= 0.0):
            raise ProblemDefinitionError("kappa must be positive and finite in every cell", "kappa")
        if not np.all(np.isfinite(self.target.values)):
            raise ProblemDefinitionError("target state has non-finite samples", "target")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "kappa", kappa)

    @property
    def mesh(self) -> Mesh:
        """Mesh the target is sampled on."""
        return self.target.mesh

    @property
    def dim(self) -> int:
        """Spatial dimension."""
        return self.mesh.dim

    @property
    def is_error_problem(self) -> bool:
        """True when the target vanishes, so the solution is zero and iterates are errors."""
        return not np.any(self.target.values)

    def with_target(self, target: GridFunction) -> "Problem":
        """Copy of the problem with another target on the same mesh."""
        self.target.check_same_mesh(target)
        return replace(self, target=target)

    def error_problem(self) -> "Problem":
        """Copy with a zero target: the error equation of the iterations."""
        return replace(self, target=GridFunction.zeros(self.mesh))

    @property
    def kappa_is_constant_one(self) -> bool:
        """True when the convergence theory (which assumes kappa = 1) applies."""
        return bool(np.all(self.kappa == 1.0))


def sample_target(mesh: Mesh, spec: TargetSpec) -> GridFunction:
    """Sample a target state on ``mesh``.

    Args:
        mesh: The mesh
        spec: ``"zero"``, ``"bump"`` (``x(1-x)``, product form in 2D), ``"sine"``
            (``sin(pi x)``, product form in 2D), a CSV path, a nodal array,
            a GridFunction or a callable of the nodal coordinates

    Raises:
        ProblemDefinitionError: If the family is unknown or the samples are not finite
    """
    coords = mesh.coordinates()
    if isinstance(spec, GridFunction):
        if spec.mesh != mesh:
            raise ProblemDefinitionError(f"target lives on {spec.mesh}, expected {mesh}", "target")
        values = spec.values
    elif isinstance(spec, np.ndarray):
        values = np.asarray(spec, dtype=float)
    elif callable(spec):
        values = np.asarray(spec(*coords), dtype=float)
    elif spec == "zero":
        values = np.zeros(mesh.shape)
    elif spec == "bump":
        values = np.prod([x * (1.0 - x) for x in coords], axis=0)
    elif spec == "sine":
        values = np.prod([np.sin(np.pi * x) for x in coords], axis=0)
    elif isinstance(spec, (str, Path)) and Path(spec).suffix.lower() == ".csv":
        return read_grid_csv(spec, mesh)
    else:
        raise ProblemDefinitionError(
            f"unknown target {spec!r}; expected one of {', '.join(TARGET_FAMILIES)} or a .csv file", "target"
        )

    if values.shape != mesh.shape:
        raise ProblemDefinitionError(f"target has shape {values.shape}, expected {mesh.shape}", "target")
    if not np.all(np.isfinite(values)):
        raise ProblemDefinitionError("target state has non-finite samples", "target")
    return GridFunction(mesh, values)


def make_kappa(mesh: Mesh, spec: KappaSpec = None, decomposition: Optional[Decomposition] = None) -> FloatArray:
    """Build a per-cell conductivity.

    Args:
        mesh: The mesh
        spec: None (kappa = 1), a constant, a per-cell array, or ``"step:k1:k2"``
            for ``k1`` left of the interface and ``k2`` right of it
        decomposition: Required for the step profile

    Raises:
        ProblemDefinitionError: If the profile cannot be parsed
    """
    if spec is None:
        return np.ones(mesh.cell_shape)
    if isinstance(spec, np.ndarray):
        return np.asarray(spec, dtype=float)
    if isinstance(spec, str) and spec.startswith("step:"):
        if decomposition is None:
            raise ProblemDefinitionError("a step conductivity needs an interface", "kappa")
        try:
            k1, k2 = (float(v) for v in spec.split(":")[1:])
        except ValueError:
            raise ProblemDefinitionError(f"malformed conductivity profile {spec!r}; use step:k1:k2", "kappa")
        kappa = np.full(mesh.cell_shape, k2)
        kappa[: decomposition.m] = k1
        return kappa
    try:
        return np.full(mesh.cell_shape, float(spec))
    except (TypeError, ValueError):
        raise ProblemDefinitionError(f"malformed conductivity {spec!r}", "kappa")


def make_problem(
    mesh: Mesh,
    nu: float,
    target: TargetSpec = "zero",
    kappa: KappaSpec = None,
    decomposition: Optional[Decomposition] = None,
) -> Problem:
    """Convenience constructor sampling the target and building the conductivity."""
    return Problem(nu=nu, kappa=make_kappa(mesh, kappa, decomposition), target=sample_target(mesh, target))
