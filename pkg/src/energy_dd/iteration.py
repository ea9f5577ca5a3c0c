"""Shared machinery of the interface iterations: configuration, reports and the driver loop."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.fft import dst

from .logging import LogEvent, log_debug, log_info, log_warning
from .mesh import Decomposition, FloatArray, GridFunction, Side, Trace
from .model import integrate, solve_monolithic_h1
from .problem import Problem
from .settings import get_settings
from .subdomain import SubdomainPair, SubdomainSolution

# Number of trailing ratios averaged into the measured rate
RATE_WINDOW = 5

# A run that stops at max_iter with a rate at or above this is reported as diverged
NON_CONTRACTING = 1.0 - 1e-12

TraceInit = Union[str, float, FloatArray]


class Verdict(str, Enum):
    """Outcome of an iteration run."""

    CONVERGED = "converged"
    DIVERGED = "diverged"
    MAX_ITER = "max_iter"


def _default(name: str) -> Callable[[], float]:
    return lambda: get_settings().default(name)


@dataclass(frozen=True)
class IterationConfig:
    """Parameters of an interface iteration.

    Attributes:
        theta: Relaxation parameter; values outside (0, 1) run but are flagged
        trace0: ``"const"`` (1 at every interface node), ``"random"``, a value or a trace
        mode_k: 2D sine-mode initializer ``sin(k*pi*x2)``; ``k = 0`` is the constant trace
        seed: Seed of the random initializer
        tol: Stop when the trace error is at most this
        max_iter: Iteration limit
        divergence_guard: Abort as diverged when the trace error exceeds this
    """

    theta: float
    trace0: TraceInit = "const"
    mode_k: Optional[int] = None
    seed: int = 0
    tol: float = field(default_factory=_default("tol"))
    max_iter: int = field(default_factory=_default("max_iter"))  # type: ignore[assignment]
    divergence_guard: float = field(default_factory=_default("divergence_guard"))

    def __post_init__(self) -> None:
        settings = get_settings()
        settings.validate("theta", self.theta)
        settings.validate("tol", self.tol)
        settings.validate("max_iter", self.max_iter)
        settings.validate("divergence_guard", self.divergence_guard)
        settings.validate("seed", self.seed)
        if self.mode_k is not None:
            settings.validate("mode_k", self.mode_k)
        if isinstance(self.trace0, str):
            settings.validate("trace0", self.trace0)

    @property
    def out_of_theory(self) -> bool:
        """Whether theta lies outside (0, 1), where the convergence results do not apply."""
        return not 0.0 < self.theta < 1.0


@dataclass(frozen=True)
class DNConfig(IterationConfig):
    """DN parameters; ``swap`` puts the Dirichlet solve on the right subdomain."""

    swap: bool = False

    @property
    def dirichlet_side(self) -> Side:
        return Side.RIGHT if self.swap else Side.LEFT


@dataclass(frozen=True)
class NNConfig(IterationConfig):
    """NN parameters."""


@dataclass(frozen=True)
class IterationRecord:
    """Diagnostics of iteration ``n``.

    Attributes:
        n: Iteration index, starting at 1
        trace_err: Sup-norm error of the interface trace
        subdomain_err: L2 error of the subdomain solutions of this iteration
        ratio: ``trace_err`` over the previous trace error
    """

    n: int
    trace_err: float
    subdomain_err: float
    ratio: float


@dataclass
class IterationReport:
    """Per-iteration records and the outcome of a run.

    Attributes:
        method: ``"dn"`` or ``"nn"``
        theta: Relaxation parameter used
        initial_error: Trace error of the initial guess
        records: One record per iteration
        verdict: Converged, diverged or max_iter
        measured_rate: Geometric mean of the trailing consecutive ratios
        final_trace: Last interface trace
        solution: Global field rebuilt from the last trace (flagged when diverged)
        reference: Monolithic solution the errors are measured against
        mode_leakage: Off-mode sine content of the trace error per iteration (mode runs only)
    """

    method: str
    theta: float
    initial_error: float
    records: List[IterationRecord] = field(default_factory=list)
    verdict: Verdict = Verdict.MAX_ITER
    measured_rate: float = float("nan")
    final_trace: Optional[Trace] = None
    solution: Optional[GridFunction] = None
    reference: Optional[GridFunction] = None
    mode_leakage: List[float] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        """Number of iterations performed."""
        return len(self.records)

    @property
    def final_error(self) -> float:
        """Trace error after the last iteration."""
        return self.records[-1].trace_err if self.records else self.initial_error

    @property
    def converged(self) -> bool:
        return self.verdict is Verdict.CONVERGED

    @property
    def errors(self) -> List[float]:
        """Trace errors, initial guess first."""
        return [self.initial_error] + [r.trace_err for r in self.records]

    def error_after(self, n: int) -> float:
        """Trace error after ``n`` iterations."""
        return self.errors[n]

    def rows(self) -> List[Tuple[int, float, float]]:
        """``(iter, trace_err, ratio)`` rows for tabular output."""
        return [(r.n, r.trace_err, r.ratio) for r in self.records]


def measured_rate(ratios: Sequence[float]) -> float:
    """Geometric mean of the last ``min(5, n - 1)`` of ``n`` consecutive ratios (at least one)."""
    if not ratios:
        return float("nan")
    window = max(1, min(RATE_WINDOW, len(ratios) - 1))
    tail = np.asarray(ratios[-window:], dtype=float)
    if not np.all(np.isfinite(tail)):
        return float("inf")
    return float(np.prod(tail) ** (1.0 / window))


def build_initial_trace(decomposition: Decomposition, config: IterationConfig) -> Trace:
    """Initial interface trace of a run.

    In 2D a mode initializer gives ``sin(k*pi*x2)`` at the interior interface
    nodes; ``k = 0`` gives the constant trace.
    """
    mesh = decomposition.mesh
    if mesh.dim == 2 and config.mode_k is not None:
        if config.mode_k == 0:
            return np.ones(decomposition.trace_size)
        return np.sin(config.mode_k * np.pi * mesh.nodes[1:-1])
    if isinstance(config.trace0, str):
        if config.trace0 == "random":
            rng = np.random.default_rng(config.seed)
            return rng.uniform(-1.0, 1.0, decomposition.trace_size)
        return np.ones(decomposition.trace_size)
    return decomposition.as_trace(config.trace0)


def sine_spectrum(trace: Trace) -> FloatArray:
    """Orthonormal sine coefficients of a 2D trace; entry ``k - 1`` is mode ``k``."""
    return np.asarray(dst(np.asarray(trace, dtype=float), type=1, norm="ortho"))


def mode_leakage(trace: Trace, mode_k: int) -> float:
    """Largest sine coefficient of ``trace`` outside mode ``mode_k``."""
    spectrum = np.abs(sine_spectrum(trace))
    if 1 <= mode_k <= spectrum.size:
        spectrum[mode_k - 1] = 0.0
    return float(np.max(spectrum)) if spectrum.size else 0.0


StepResult = Tuple[Trace, Sequence[SubdomainSolution]]


def _subdomain_error(decomposition: Decomposition, solutions: Sequence[SubdomainSolution], reference: FloatArray) -> float:
    mesh = decomposition.mesh
    total = 0.0
    for sol in solutions:
        lo, hi = decomposition.node_range(sol.side)
        diff = sol.values - reference[lo : hi + 1]
        total += integrate(mesh, diff**2)
    return float(np.sqrt(total))


def iterate(
    problem: Problem,
    decomposition: Decomposition,
    config: IterationConfig,
    step: Callable[[Trace], StepResult],
    pair: SubdomainPair,
    method: str,
    event: LogEvent,
) -> IterationReport:
    """Drive an interface iteration until convergence, divergence or ``max_iter``.

    Args:
        problem: The control problem
        decomposition: Interface position
        config: Iteration parameters
        step: Maps a trace to the next trace and the subdomain solutions it produced
        pair: Subdomain systems used to rebuild the final solution
        method: Method name for the report
        event: Log event of the method

    Returns:
        The report; divergence is a verdict, not an exception
    """
    if problem.is_error_problem:
        reference = GridFunction.zeros(problem.mesh)
    else:
        reference = solve_monolithic_h1(problem)
    reference_trace = decomposition.interface_values(reference.values)

    if config.out_of_theory:
        log_warning(event, "Relaxation parameter outside (0, 1)", theta=config.theta)

    trace = build_initial_trace(decomposition, config)
    previous = float(np.max(np.abs(trace - reference_trace)))
    report = IterationReport(method=method, theta=config.theta, initial_error=previous, reference=reference)
    track_mode = problem.dim == 2 and config.mode_k is not None and config.mode_k > 0
    verdict: Optional[Verdict] = None

    for n in range(1, config.max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            trace, solutions = step(trace)
            error = float(np.max(np.abs(trace - reference_trace)))
        diverging = not np.isfinite(error) or error > config.divergence_guard
        if previous > 0.0:
            ratio = error / previous
        else:
            ratio = 0.0 if error == 0.0 else float("inf")
        sub_err = float("nan") if diverging else _subdomain_error(decomposition, solutions, reference.values)
        report.records.append(IterationRecord(n=n, trace_err=error, subdomain_err=sub_err, ratio=ratio))
        if track_mode and not diverging:
            report.mode_leakage.append(mode_leakage(trace - reference_trace, int(config.mode_k or 0)))
        log_debug(event, "Iteration", n=n, trace_err=error, ratio=ratio)

        if diverging:
            verdict = Verdict.DIVERGED
            break
        if error <= config.tol:
            verdict = Verdict.CONVERGED
            break
        previous = error

    report.measured_rate = measured_rate([r.ratio for r in report.records])
    if verdict is None:
        verdict = Verdict.DIVERGED if report.measured_rate >= NON_CONTRACTING else Verdict.MAX_ITER
    report.verdict = verdict
    report.final_trace = trace

    if np.all(np.isfinite(trace)):
        rhs = None if problem.is_error_problem else problem.target
        rebuilt = pair.reconstruct(trace, rhs)
        report.solution = GridFunction(problem.mesh, rebuilt.values, diverged=verdict is Verdict.DIVERGED)
    else:
        report.solution = GridFunction(problem.mesh, np.full(problem.mesh.shape, np.nan), diverged=True)

    log_info(
        event,
        "Iteration finished",
        verdict=verdict.value,
        iterations=report.iterations,
        rate=report.measured_rate,
        theta=config.theta,
    )
    return report
