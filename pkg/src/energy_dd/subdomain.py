"""Subdomain solves with Dirichlet or Neumann interface data, and interface fluxes.

Each subdomain is a closed slab of x1 node columns ending at the interface.
Its operator carries the interface column with half weight, so the flux of
a subdomain solution is the half-row residual ``h*(K e - omega f)`` at the
interface nodes. Left and right fluxes add up to ``h`` times the monolithic
residual, which makes the fixed point of the iterations the monolithic
discrete solution.
"""

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Union

import numpy as np
from numpy.typing import NDArray

from .errors import MeshMismatchError, ProblemDefinitionError
from .logging import LogEvent, log_debug
from .mesh import Decomposition, FloatArray, GridFunction, Side, Trace
from .operators import DirichletSystem, RegionOperator, assemble_region
from .problem import Problem


class BCKind(str, Enum):
    """Kind of interface condition."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class InterfaceBC:
    """Interface condition: a trace value (Dirichlet) or an outward flux (Neumann).

    Attributes:
        kind: Dirichlet or Neumann
        data: One value per interface unknown
    """

    kind: BCKind
    data: Trace

    def __post_init__(self) -> None:
        data = np.atleast_1d(np.asarray(self.data, dtype=float))
        if data.ndim != 1:
            raise MeshMismatchError(f"interface data must be one-dimensional, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ProblemDefinitionError("interface data must be finite", "bc")
        object.__setattr__(self, "kind", BCKind(self.kind))
        object.__setattr__(self, "data", data)

    @classmethod
    def dirichlet(cls, data: Union[float, Trace]) -> "InterfaceBC":
        return cls(BCKind.DIRICHLET, np.atleast_1d(np.asarray(data, dtype=float)))

    @classmethod
    def neumann(cls, data: Union[float, Trace]) -> "InterfaceBC":
        return cls(BCKind.NEUMANN, np.atleast_1d(np.asarray(data, dtype=float)))


@dataclass(frozen=True)
class SubdomainSolution:
    """Nodal values on a closed subdomain, interface column included.

    Attributes:
        side: Which subdomain
        values: Array over the subdomain nodes (x1 columns ``lo..hi``)
        decomposition: The decomposition the solution belongs to
    """

    side: Side
    values: FloatArray
    decomposition: Decomposition

    @property
    def interface_index(self) -> int:
        """Local x1 index of the interface column."""
        return interface_column(self.decomposition, self.side)

    @property
    def interface_trace(self) -> Trace:
        """Values at the interface unknowns."""
        return _gather(self.values, self.interface_index, self.decomposition.mesh.dim)


def interface_column(decomposition: Decomposition, side: Side) -> int:
    """Local x1 index of the interface inside the slab of ``side``."""
    return decomposition.m if side is Side.LEFT else 0


def _gather(values: FloatArray, column: int, dim: int) -> Trace:
    if dim == 1:
        return np.array([values[column]], dtype=float)
    return np.array(values[column, 1:-1], dtype=float)


def _scatter(target: FloatArray, column: int, dim: int, trace: Trace) -> None:
    if dim == 1:
        target[column] = trace[0]
    else:
        target[column, 1:-1] = trace


class SubdomainSystem:
    """Factored operators of one subdomain, reused across iterations.

    Args:
        problem: The control problem
        decomposition: Interface position
        side: Which subdomain
    """

    def __init__(self, problem: Problem, decomposition: Decomposition, side: Side):
        if decomposition.mesh != problem.mesh:
            raise MeshMismatchError(f"decomposition of {decomposition.mesh} used with a problem on {problem.mesh}")
        self.problem = problem
        self.decomposition = decomposition
        self.side = Side(side)
        self.lo, self.hi = decomposition.node_range(self.side)
        self.column = interface_column(decomposition, self.side)
        self.dim = problem.dim

    @functools.cached_property
    def operator(self) -> RegionOperator:
        """Subdomain operator with a half-weight interface column."""
        mesh = self.problem.mesh
        return assemble_region(
            mesh,
            self.problem.kappa,
            self.lo,
            self.hi,
            diffusion=self.problem.nu,
            reaction=1.0,
            half_column=self.decomposition.m,
        )

    def _outer_boundary(self) -> NDArray[np.bool_]:
        return np.array(self.problem.mesh.boundary_mask()[self.lo : self.hi + 1])

    @functools.cached_property
    def _dirichlet(self) -> DirichletSystem:
        fixed = self._outer_boundary()
        if self.dim == 1:
            fixed[self.column] = True
        else:
            fixed[self.column, :] = True
        return DirichletSystem(self.operator, fixed)

    @functools.cached_property
    def _neumann(self) -> DirichletSystem:
        return DirichletSystem(self.operator, self._outer_boundary())

    def restrict_rhs(self, rhs: Optional[GridFunction]) -> Optional[FloatArray]:
        """Restrict a global right-hand side to the subdomain nodes."""
        if rhs is None:
            return None
        if rhs.mesh != self.problem.mesh:
            raise MeshMismatchError(f"right-hand side lives on {rhs.mesh}, the problem on {self.problem.mesh}")
        return self.decomposition.restrict(rhs.values, self.side)

    def solve(self, bc: InterfaceBC, rhs: Optional[GridFunction] = None) -> SubdomainSolution:
        """Solve ``-nu*div(kappa grad e) + e = rhs`` on the subdomain.

        Args:
            bc: Interface condition; a Neumann datum is the outward flux
            rhs: Global right-hand side; zero if omitted

        Returns:
            The subdomain solution, zero on the physical boundary
        """
        data = self.decomposition.as_trace(bc.data)
        local_rhs = self.restrict_rhs(rhs)
        weighted = np.zeros(self.operator.shape)
        if local_rhs is not None:
            weighted = self.operator.node_weight.reshape(self.operator.shape) * local_rhs

        if bc.kind is BCKind.DIRICHLET:
            prescribed = np.zeros(self.operator.shape)
            _scatter(prescribed, self.column, self.dim, data)
            values = self._dirichlet.solve(weighted, prescribed)
        else:
            load = weighted.copy()
            interface_load = _gather(load, self.column, self.dim) + data / self.operator.h
            _scatter(load, self.column, self.dim, interface_load)
            values = self._neumann.solve(load)

        log_debug(
            LogEvent.SUBDOMAIN_SOLVE,
            "Subdomain solve",
            side=self.side.value,
            kind=bc.kind.value,
            n_cols=self.hi - self.lo + 1,
        )
        return SubdomainSolution(side=self.side, values=values, decomposition=self.decomposition)

    def flux(self, sol: SubdomainSolution, rhs: Optional[GridFunction] = None) -> Trace:
        """Outward flux ``h*(K e - omega f)`` at the interface unknowns.

        Raises:
            MeshMismatchError: If ``sol`` belongs to another subdomain
        """
        if sol.side is not self.side or sol.decomposition != self.decomposition:
            raise MeshMismatchError(f"solution of the {sol.side.value} subdomain passed to the {self.side.value} one")
        if sol.values.shape != self.operator.shape:
            raise MeshMismatchError(f"solution of shape {sol.values.shape}, expected {self.operator.shape}")
        residual = self.operator.residual(sol.values, self.restrict_rhs(rhs))
        return self.operator.h * _gather(residual, self.column, self.dim)


class SubdomainPair:
    """Both subdomain systems of a decomposition, built lazily."""

    def __init__(self, problem: Problem, decomposition: Decomposition):
        self.problem = problem
        self.decomposition = decomposition
        self._systems: Dict[Side, SubdomainSystem] = {}

    def __getitem__(self, side: Side) -> SubdomainSystem:
        if side not in self._systems:
            self._systems[side] = SubdomainSystem(self.problem, self.decomposition, side)
        return self._systems[side]

    def assemble(self, left: SubdomainSolution, right: SubdomainSolution) -> FloatArray:
        """Global nodal array from the two subdomain solutions; the interface column comes from ``right``."""
        return combine(self.decomposition, left, right)

    def reconstruct(self, trace: Trace, rhs: Optional[GridFunction] = None) -> GridFunction:
        """Global field from Dirichlet solves on both subdomains with interface value ``trace``."""
        bc = InterfaceBC.dirichlet(trace)
        left = self[Side.LEFT].solve(bc, rhs)
        right = self[Side.RIGHT].solve(bc, rhs)
        return GridFunction(self.decomposition.mesh, self.assemble(left, right))


def combine(decomposition: Decomposition, left: SubdomainSolution, right: SubdomainSolution) -> FloatArray:
    """Glue a left and a right subdomain solution into a global nodal array."""
    if left.side is not Side.LEFT or right.side is not Side.RIGHT:
        raise MeshMismatchError("combine expects a left and a right subdomain solution")
    values = np.zeros(decomposition.mesh.shape)
    m = decomposition.m
    values[: m + 1] = left.values
    values[m:] = right.values
    return values


def solve_subdomain(
    problem: Problem,
    decomposition: Decomposition,
    side: Side,
    bc: InterfaceBC,
    rhs: Optional[GridFunction] = None,
) -> SubdomainSolution:
    """Solve one subdomain problem with the given interface condition.

    Args:
        problem: The control problem (``nu`` and ``kappa``)
        decomposition: Interface position
        side: Which subdomain
        bc: Dirichlet value or Neumann flux at the interface
        rhs: Global right-hand side; zero if omitted
    """
    return SubdomainSystem(problem, decomposition, side).solve(bc, rhs)


def variational_flux(
    problem: Problem,
    decomposition: Decomposition,
    sol: SubdomainSolution,
    rhs: Optional[GridFunction] = None,
) -> Trace:
    """Outward half-row flux of a subdomain solution at the interface unknowns.

    Raises:
        MeshMismatchError: If ``sol`` does not belong to ``decomposition``
    """
    if sol.decomposition != decomposition:
        raise MeshMismatchError("subdomain solution belongs to another decomposition")
    return SubdomainSystem(problem, decomposition, sol.side).flux(sol, rhs)
