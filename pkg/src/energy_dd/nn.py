"""Neumann-Neumann iteration.

Both subdomains are solved with the current trace as Dirichlet data; the sum
of their outward fluxes drives Neumann correction problems without volume
forcing, and the trace moves by the relaxed sum of the corrections.
"""

from typing import NamedTuple, Optional, Tuple

from .errors import MeshMismatchError
from .iteration import IterationReport, NNConfig, StepResult, iterate
from .logging import LogEvent
from .mesh import Decomposition, GridFunction, Side, Trace
from .problem import Problem
from .subdomain import InterfaceBC, SubdomainPair, SubdomainSolution


class NNDiagnostics(NamedTuple):
    """Intermediate fields of one NN step.

    Attributes:
        dirichlet: Left and right Dirichlet solutions
        corrections: Left and right Neumann corrections
        flux_jump: Sum of the outward fluxes of the Dirichlet solutions
    """

    dirichlet: Tuple[SubdomainSolution, SubdomainSolution]
    corrections: Tuple[SubdomainSolution, SubdomainSolution]
    flux_jump: Trace


class NNStep(NamedTuple):
    """Result of one NN step."""

    trace: Trace
    diagnostics: NNDiagnostics


def nn_step(
    problem: Problem,
    decomposition: Decomposition,
    trace: Trace,
    config: NNConfig,
    rhs: Optional[GridFunction] = None,
    pair: Optional[SubdomainPair] = None,
) -> NNStep:
    """Perform one NN step.

    Args:
        problem: The control problem
        decomposition: Interface position
        trace: Current interface trace
        config: Relaxation parameter
        rhs: Volume right-hand side of the Dirichlet solves; zero if omitted
        pair: Factored subdomain systems to reuse

    Returns:
        ``(new_trace, diagnostics)``
    """
    pair = pair or SubdomainPair(problem, decomposition)
    trace = decomposition.as_trace(trace)
    bc = InterfaceBC.dirichlet(trace)
    left = pair[Side.LEFT].solve(bc, rhs)
    right = pair[Side.RIGHT].solve(bc, rhs)

    jump = pair[Side.LEFT].flux(left, rhs) + pair[Side.RIGHT].flux(right, rhs)

    correction = InterfaceBC.neumann(jump)
    psi_left = pair[Side.LEFT].solve(correction)
    psi_right = pair[Side.RIGHT].solve(correction)

    new_trace = trace - config.theta * (psi_left.interface_trace + psi_right.interface_trace)
    return NNStep(new_trace, NNDiagnostics((left, right), (psi_left, psi_right), jump))


def run_nn(problem: Problem, decomposition: Decomposition, config: NNConfig) -> IterationReport:
    """Iterate NN steps on ``problem`` with the same reporting as :func:`energy_dd.dn.run_dn`."""
    pair = SubdomainPair(problem, decomposition)
    rhs = None if problem.is_error_problem else problem.target

    def step(trace: Trace) -> StepResult:
        result = nn_step(problem, decomposition, trace, config, rhs, pair)
        return result.trace, result.diagnostics.dirichlet

    return iterate(problem, decomposition, config, step, pair, "nn", LogEvent.NN_ITERATION)


def _require_2d(decomposition: Decomposition) -> None:
    if decomposition.mesh.dim != 2:
        raise MeshMismatchError(f"expected a 2D mesh, got {decomposition.mesh}")


def nn_step_2d(
    problem: Problem,
    decomposition: Decomposition,
    trace: Trace,
    config: NNConfig,
    rhs: Optional[GridFunction] = None,
    pair: Optional[SubdomainPair] = None,
) -> NNStep:
    """NN step on the unit square; the trace is the interior interface column."""
    _require_2d(decomposition)
    return nn_step(problem, decomposition, trace, config, rhs, pair)


def run_nn_2d(problem: Problem, decomposition: Decomposition, config: NNConfig) -> IterationReport:
    """NN iteration on the unit square, with optional sine-mode initializer."""
    _require_2d(decomposition)
    return run_nn(problem, decomposition, config)
