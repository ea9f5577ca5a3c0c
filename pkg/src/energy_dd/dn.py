"""Relaxed Dirichlet-Neumann iteration.

One sweep solves a Dirichlet problem on the first subdomain with the current
trace, hands the negated outward flux of that solution to a Neumann problem
on the second subdomain, and relaxes the trace towards the Neumann solution's
interface values. The first subdomain is the left one unless the
configuration swaps the roles.
"""

from typing import NamedTuple, Optional

from .errors import MeshMismatchError
from .iteration import DNConfig, IterationReport, StepResult, iterate
from .logging import LogEvent
from .mesh import Decomposition, GridFunction, Trace
from .problem import Problem
from .subdomain import InterfaceBC, SubdomainPair, SubdomainSolution


class DNStep(NamedTuple):
    """Result of one DN sweep."""

    trace: Trace
    dirichlet: SubdomainSolution
    neumann: SubdomainSolution


def dn_step(
    problem: Problem,
    decomposition: Decomposition,
    trace: Trace,
    config: DNConfig,
    rhs: Optional[GridFunction] = None,
    pair: Optional[SubdomainPair] = None,
) -> DNStep:
    """Perform one relaxed DN sweep.

    Args:
        problem: The control problem
        decomposition: Interface position
        trace: Current interface trace
        config: Relaxation parameter and orientation
        rhs: Volume right-hand side; zero (the error equation) if omitted
        pair: Factored subdomain systems to reuse

    Returns:
        ``(new_trace, dirichlet_solution, neumann_solution)``
    """
    pair = pair or SubdomainPair(problem, decomposition)
    trace = decomposition.as_trace(trace)
    first = config.dirichlet_side
    dirichlet = pair[first].solve(InterfaceBC.dirichlet(trace), rhs)
    flux = pair[first].flux(dirichlet, rhs)
    neumann = pair[first.other].solve(InterfaceBC.neumann(-flux), rhs)
    new_trace = (1.0 - config.theta) * trace + config.theta * neumann.interface_trace
    return DNStep(new_trace, dirichlet, neumann)


def run_dn(problem: Problem, decomposition: Decomposition, config: DNConfig) -> IterationReport:
    """Iterate DN sweeps on ``problem``.

    A problem with a zero target runs the error equation and the trace is the
    error itself; otherwise errors are measured against the monolithic solution.
    """
    pair = SubdomainPair(problem, decomposition)
    rhs = None if problem.is_error_problem else problem.target

    def step(trace: Trace) -> StepResult:
        result = dn_step(problem, decomposition, trace, config, rhs, pair)
        return result.trace, (result.dirichlet, result.neumann)

    return iterate(problem, decomposition, config, step, pair, "dn", LogEvent.DN_ITERATION)


def _require_2d(decomposition: Decomposition) -> None:
    if decomposition.mesh.dim != 2:
        raise MeshMismatchError(f"expected a 2D mesh, got {decomposition.mesh}")


def dn_step_2d(
    problem: Problem,
    decomposition: Decomposition,
    trace: Trace,
    config: DNConfig,
    rhs: Optional[GridFunction] = None,
    pair: Optional[SubdomainPair] = None,
) -> DNStep:
    """DN sweep on the unit square; the trace is the interior interface column."""
    _require_2d(decomposition)
    return dn_step(problem, decomposition, trace, config, rhs, pair)


def run_dn_2d(problem: Problem, decomposition: Decomposition, config: DNConfig) -> IterationReport:
    """DN iteration on the unit square, with optional sine-mode initializer."""
    _require_2d(decomposition)
    return run_dn(problem, decomposition, config)
