"""Monolithic solvers, control recovery and cost evaluation.

Under energy-norm regularization the optimality system collapses to the
reaction-diffusion equation ``-nu*div(kappa grad y) + y = yhat``; its direct
solution is the oracle every domain-decomposition run is checked against.
The L2-regularized optimality system is solved as a coupled state/adjoint
system for comparison (1D only).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
import scipy.sparse as sp
from scipy.integrate import trapezoid
from scipy.sparse.linalg import spsolve

from .errors import MeshMismatchError, ProblemDefinitionError, SolverError
from .logging import LogEvent, log_debug
from .mesh import FloatArray, GridFunction, Mesh
from .operators import DirichletSystem, RegionOperator, assemble_region, relative_residual
from .problem import Problem


class Regularization(str, Enum):
    """Control cost used in the objective."""

    L2 = "l2"
    HMINUS1 = "hminus1"

    @classmethod
    def parse(cls, value: Union[str, "Regularization"]) -> "Regularization":
        """Parse a regularization name; ``h1`` is accepted for the energy norm.

        Raises:
            ProblemDefinitionError: If the name is not recognized
        """
        if isinstance(value, Regularization):
            return value
        name = str(value).strip().lower()
        if name in ("h1", "hminus1", "h-1", "energy"):
            return cls.HMINUS1
        if name == "l2":
            return cls.L2
        raise ProblemDefinitionError(f"unknown regularization {value!r}; expected l2 or h1", "reg")


@dataclass(frozen=True)
class KKTSolution:
    """State, adjoint and control of the L2-regularized problem."""

    y: GridFunction
    p: GridFunction
    u: GridFunction


@dataclass(frozen=True)
class ControlContrast:
    """Controls of the same problem under both regularizations.

    Attributes:
        u_l2: ``-p/nu`` from the L2 optimality system
        u_energy: ``(yhat - y)/nu`` from the energy-norm system
        difference: Discrete L2 norm of ``u_l2 - u_energy``
    """

    u_l2: GridFunction
    u_energy: GridFunction
    difference: float


def integrate(mesh: Mesh, values: FloatArray) -> float:
    """Composite trapezoid integral of nodal values over the mesh."""
    result = np.asarray(values, dtype=float)
    for _ in range(mesh.dim):
        result = trapezoid(result, dx=mesh.h, axis=0)
    return float(result)


def l2_norm(gf: GridFunction) -> float:
    """Discrete L2 norm (trapezoid quadrature)."""
    return float(np.sqrt(integrate(gf.mesh, gf.values**2)))


def _check_mesh(problem: Problem, gf: GridFunction, name: str) -> None:
    if gf.mesh != problem.mesh:
        raise MeshMismatchError(f"{name} lives on {gf.mesh}, the problem on {problem.mesh}")


def monolithic_operator(problem: Problem) -> RegionOperator:
    """``-nu*div(kappa grad .) + 1`` on the whole mesh."""
    mesh = problem.mesh
    return assemble_region(mesh, problem.kappa, 0, mesh.n_cells, diffusion=problem.nu, reaction=1.0)


def state_operator(problem: Problem) -> RegionOperator:
    """``-div(kappa grad .)`` on the whole mesh."""
    mesh = problem.mesh
    return assemble_region(mesh, problem.kappa, 0, mesh.n_cells, diffusion=1.0, reaction=0.0)


def solve_monolithic_h1(problem: Problem, mesh: Union[Mesh, None] = None) -> GridFunction:
    """Solve the energy-norm optimality system ``-nu*div(kappa grad y) + y = yhat``.

    Args:
        problem: The control problem
        mesh: Optional mesh; must be the one the target is sampled on

    Returns:
        The discrete optimal state, zero on the boundary
    """
    if mesh is not None and mesh != problem.mesh:
        raise MeshMismatchError(f"target is sampled on {problem.mesh}, not on {mesh}")
    mesh = problem.mesh
    operator = monolithic_operator(problem)
    boundary = mesh.boundary_mask()
    values = DirichletSystem(operator, boundary).solve(problem.target.values)
    log_debug(
        LogEvent.MONOLITHIC_SOLVE,
        "Monolithic solve",
        n_cells=mesh.n_cells,
        dim=mesh.dim,
        residual=relative_residual(operator, values, problem.target.values, ~boundary),
    )
    return GridFunction(mesh, values)


def monolithic_residual(problem: Problem, y: GridFunction) -> float:
    """Relative residual of ``y`` in the energy-norm optimality system."""
    _check_mesh(problem, y, "state")
    return relative_residual(
        monolithic_operator(problem), y.values, problem.target.values, ~problem.mesh.boundary_mask()
    )


def solve_state(problem: Problem, u: GridFunction) -> GridFunction:
    """Solve the state equation ``-div(kappa grad w) = u`` with zero boundary values."""
    _check_mesh(problem, u, "control")
    operator = state_operator(problem)
    values = DirichletSystem(operator, problem.mesh.boundary_mask()).solve(u.values)
    return GridFunction(problem.mesh, values)


def apply_state_operator(problem: Problem, y: GridFunction) -> GridFunction:
    """``-div(kappa grad y)`` at the interior nodes, zero on the boundary."""
    _check_mesh(problem, y, "state")
    values = state_operator(problem).apply(y.values)
    values[problem.mesh.boundary_mask()] = 0.0
    return GridFunction(problem.mesh, values)


def recover_control_h1(problem: Problem, y: GridFunction) -> GridFunction:
    """Control of the energy-norm problem: ``u = (yhat - y)/nu`` nodewise.

    Raises:
        MeshMismatchError: If ``y`` and the target live on different meshes
    """
    _check_mesh(problem, y, "state")
    return GridFunction(problem.mesh, (problem.target.values - y.values) / problem.nu)


def solve_monolithic_l2_kkt(problem: Problem, mesh: Union[Mesh, None] = None) -> KKTSolution:
    """Solve the L2-regularized optimality system in 1D.

    With ``S = -div(kappa grad .)`` and ``u = -p/nu`` the interior unknowns
    satisfy ``S y + p/nu = 0`` and ``-y + S p = -yhat``.

    Raises:
        ProblemDefinitionError: If the problem is two-dimensional
        SolverError: If the sparse factorization fails
    """
    if problem.dim != 1:
        raise ProblemDefinitionError("the L2 optimality system is only available in 1D", "dim")
    if mesh is not None and mesh != problem.mesh:
        raise MeshMismatchError(f"target is sampled on {problem.mesh}, not on {mesh}")
    mesh = problem.mesh
    interior = ~mesh.boundary_mask()
    stiffness = state_operator(problem).matrix[interior][:, interior]
    n = stiffness.shape[0]
    eye = sp.identity(n, format="csr")
    block = sp.bmat([[stiffness, eye / problem.nu], [-eye, stiffness]], format="csc")
    rhs = np.concatenate([np.zeros(n), -problem.target.values[interior]])

    solution = spsolve(block, rhs)
    if not np.all(np.isfinite(solution)):
        raise SolverError("the L2 optimality system could not be factored")

    y = np.zeros(mesh.shape)
    p = np.zeros(mesh.shape)
    y[interior] = solution[:n]
    p[interior] = solution[n:]
    residual = float(np.max(np.abs(block @ solution - rhs)) / max(np.max(np.abs(rhs)), 1e-300))
    log_debug(LogEvent.KKT_SOLVE, "L2 optimality solve", n_cells=mesh.n_cells, residual=residual)
    return KKTSolution(
        y=GridFunction(mesh, y),
        p=GridFunction(mesh, p),
        u=GridFunction(mesh, -p / problem.nu),
    )


def kkt_residual(problem: Problem, solution: KKTSolution) -> float:
    """Largest relative residual of the three rows of the L2 optimality system."""
    scale = max(problem.target.max_abs(), solution.y.max_abs(), solution.p.max_abs(), 1e-300)
    state_row = apply_state_operator(problem, solution.y).values - solution.u.values
    adjoint_row = apply_state_operator(problem, solution.p).values - (solution.y.values - problem.target.values)
    interior = ~problem.mesh.boundary_mask()
    gradient_row = solution.p.values + problem.nu * solution.u.values
    stiffness_scale = 4.0 * float(np.max(problem.kappa)) / problem.mesh.h**2
    return float(
        max(
            np.max(np.abs(state_row[interior])) / (stiffness_scale * scale),
            np.max(np.abs(adjoint_row[interior])) / (stiffness_scale * scale),
            np.max(np.abs(gradient_row)) / scale,
        )
    )


def h_minus1_norm_squared(problem: Problem, u: GridFunction) -> float:
    """Squared energy norm ``|sqrt(kappa) grad w|^2`` with ``-div(kappa grad w) = u``.

    Evaluated as ``h^d * w.(K w)``, which is the edge sum of ``kappa*|dw|^2``
    scaled to the cell measure.
    """
    w = solve_state(problem, u)
    operator = state_operator(problem)
    return float(problem.mesh.h**problem.dim * np.dot(w.values.ravel(), operator.apply(w.values).ravel()))


def cost(problem: Problem, y: GridFunction, u: GridFunction, mode: Union[str, Regularization]) -> float:
    """Objective ``1/2 |y - yhat|^2 + nu/2 |u|^2`` in the L2 or energy norm.

    Raises:
        ProblemDefinitionError: If the mode is not recognized
        MeshMismatchError: If the fields live on different meshes
    """
    mode = Regularization.parse(mode)
    _check_mesh(problem, y, "state")
    _check_mesh(problem, u, "control")
    tracking = 0.5 * integrate(problem.mesh, (y.values - problem.target.values) ** 2)
    if mode is Regularization.L2:
        control = integrate(problem.mesh, u.values**2)
    else:
        control = h_minus1_norm_squared(problem, u)
    return tracking + 0.5 * problem.nu * control


def regularization_contrast(problem: Problem) -> ControlContrast:
    """Compare the L2 control with the energy-norm control of the same 1D problem."""
    kkt = solve_monolithic_l2_kkt(problem)
    u_energy = recover_control_h1(problem, solve_monolithic_h1(problem))
    difference = l2_norm(GridFunction(problem.mesh, kkt.u.values - u_energy.values))
    return ControlContrast(u_l2=kkt.u, u_energy=u_energy, difference=difference)
