"""Experiment runs behind the ``edd`` command: monolithic solves, DN/NN runs, theory scans and sweeps.

Every run is described by a :class:`RunSpec` and writes CSV with 17
significant digits, so repeated runs with the same spec and seed produce
byte-identical output.
"""

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .dn import run_dn
from .errors import ConstraintViolation
from .gridio import write_grid_csv
from .iteration import DNConfig, IterationReport, NNConfig, Verdict
from .logging import LogEvent, log_debug, log_info, log_warning
from .mesh import Decomposition, Mesh, make_mesh
from .model import Regularization, recover_control_h1, solve_monolithic_h1, solve_monolithic_l2_kkt
from .nn import run_nn
from .problem import Problem, make_problem
from .settings import get_settings
from .theory import LIMIT, Method, optimal_theta, predicted_rate, rho_2d, rho_curve, theta_star_2d

COMMANDS = ("solve", "dn", "nn", "theory", "sweep")
OPTIMAL = "optimal"
NU_H2 = "h2"
FIELDS = ("control", "state", "adjoint")
FLOAT_FORMAT = "{:.17g}"

NuSpec = Union[float, str]
ThetaSpec = Union[float, str]


@dataclass(frozen=True)
class RunSpec:
    """Fully resolved description of one ``edd`` invocation.

    List-valued fields hold a single entry except for ``theta`` (one column
    per value) and the fields a sweep crosses: ``nu``, ``theta``, ``m``,
    ``alpha``, ``n_cells`` and ``method``.
    """

    command: str
    nu: Tuple[NuSpec, ...] = (1.0,)
    n_cells: Tuple[int, ...] = (100,)
    m: Tuple[int, ...] = ()
    alpha: Tuple[float, ...] = ()
    theta: Tuple[ThetaSpec, ...] = (OPTIMAL,)
    method: Tuple[str, ...] = ("dn",)
    reg: str = "h1"
    dim: int = 1
    mode_k: Optional[int] = None
    iters: int = field(default_factory=lambda: int(get_settings().default("max_iter")))
    tol: float = field(default_factory=lambda: float(get_settings().default("tol")))
    guard: float = field(default_factory=lambda: float(get_settings().default("divergence_guard")))
    trace0: str = "const"
    seed: int = 0
    scan_k: int = field(default_factory=lambda: int(get_settings().default("scan_k")))
    symbol: str = "continuum"
    swap: bool = False
    target: str = "zero"
    kappa: Optional[str] = None
    grid_field: str = "control"
    out: Optional[str] = None
    jobs: int = 1

    def validate(self) -> None:
        """Check every parameter against the bundled constraints.

        Raises:
            ConstraintViolation: On the first offending parameter
        """
        settings = get_settings()
        if self.command not in COMMANDS:
            raise ConstraintViolation("command", self.command, f"be one of {', '.join(COMMANDS)}")
        for name in ("nu", "n_cells", "theta", "method"):
            if not getattr(self, name):
                raise ConstraintViolation(name, "[]", "be a non-empty list")
        for nu in self.nu:
            if nu != NU_H2:
                settings.validate("nu", nu)
        for theta in self.theta:
            if theta != OPTIMAL:
                settings.validate("theta", theta)
        for n in self.n_cells:
            settings.validate("n_cells", n)
        for method in self.method:
            settings.validate("method", method)
        settings.validate("reg", self.reg)
        settings.validate("max_iter", self.iters)
        settings.validate("tol", self.tol)
        settings.validate("divergence_guard", self.guard)
        settings.validate("trace0", self.trace0)
        settings.validate("seed", self.seed)
        settings.validate("scan_k", self.scan_k)
        settings.validate("symbol", self.symbol)
        settings.validate("jobs", self.jobs)
        if self.mode_k is not None:
            settings.validate("mode_k", self.mode_k)
        if self.dim not in (1, 2):
            raise ConstraintViolation("dim", self.dim, "be 1 or 2")
        if self.grid_field not in FIELDS:
            raise ConstraintViolation("field", self.grid_field, f"be one of {', '.join(FIELDS)}")
        if self.m and self.alpha:
            raise ConstraintViolation("alpha", self.alpha[0], "not be combined with --m")
        if self.command != "sweep":
            for name in ("nu", "n_cells", "m", "alpha", "method"):
                if len(getattr(self, name)) > 1:
                    raise ConstraintViolation(name, ",".join(map(str, getattr(self, name))), "be a single value")
        for n in self.n_cells:
            self.decompositions(make_mesh(n, self.dim))

    def decompositions(self, mesh: Mesh) -> List[Decomposition]:
        """Interfaces requested for ``mesh``: by index, by position, or the midpoint."""
        if self.m:
            return [Decomposition(mesh, m) for m in self.m]
        if self.alpha:
            return [Decomposition.from_alpha(mesh, alpha) for alpha in self.alpha]
        return [Decomposition(mesh, mesh.n_cells // 2)]


@dataclass
class RunOutcome:
    """Result of :func:`run`.

    Attributes:
        resolved_thetas: ``theta="optimal"`` resolutions, keyed by a label
        reports: Iteration reports of dn/nn runs
    """

    resolved_thetas: Dict[str, float] = field(default_factory=dict)
    reports: List[IterationReport] = field(default_factory=list)

    @property
    def diverged(self) -> bool:
        """Whether any iteration run ended with a divergence verdict."""
        return any(r.verdict is Verdict.DIVERGED for r in self.reports)


def resolve_nu(nu: NuSpec, n_cells: int) -> float:
    """Turn a regularization spec into a value; ``"h2"`` couples it to the mesh as ``h^2``."""
    if nu == NU_H2:
        return 1.0 / n_cells**2
    return float(nu)


def format_value(value: Any) -> str:
    """Render a CSV cell: floats with 17 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FORMAT.format(float(value))


def write_rows(output: TextIO, rows: Iterable[Sequence[Any]]) -> None:
    """Write CSV rows with :func:`format_value` cells."""
    writer = csv.writer(output, lineterminator="\n")
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def _theory_alpha(method: str, alpha: float, swap: bool) -> float:
    return 1.0 - alpha if method == Method.DN.value and swap else alpha


def _resolve_theta(
    spec: RunSpec, method: str, theta: ThetaSpec, nu: float, decomposition: Decomposition
) -> float:
    if theta != OPTIMAL:
        return float(theta)
    mesh = decomposition.mesh
    return optimal_theta(
        method,
        nu,
        _theory_alpha(method, decomposition.alpha, spec.swap),
        dim=mesh.dim,
        symbol=spec.symbol,
        h=mesh.h,
        mode_k=spec.mode_k,
        scan_k=spec.scan_k,
    )


def _build_problem(spec: RunSpec, n_cells: int, nu: NuSpec, decomposition: Optional[Decomposition]) -> Problem:
    mesh = decomposition.mesh if decomposition is not None else make_mesh(n_cells, spec.dim)
    problem = make_problem(mesh, resolve_nu(nu, n_cells), spec.target, spec.kappa, decomposition)
    if not problem.kappa_is_constant_one:
        log_warning(LogEvent.THEORY, "Convergence theory assumes kappa = 1; predicted values are indicative only")
    return problem


def _iteration_config(spec: RunSpec, method: str, theta: float) -> Union[DNConfig, NNConfig]:
    common: Dict[str, Any] = dict(
        theta=theta,
        trace0=spec.trace0,
        mode_k=spec.mode_k,
        seed=spec.seed,
        tol=spec.tol,
        max_iter=spec.iters,
        divergence_guard=spec.guard,
    )
    if method == Method.DN.value:
        return DNConfig(swap=spec.swap, **common)
    return NNConfig(**common)


def run_iteration(problem: Problem, decomposition: Decomposition, config: Union[DNConfig, NNConfig]) -> IterationReport:
    """Run DN or NN depending on the config type."""
    if isinstance(config, DNConfig):
        return run_dn(problem, decomposition, config)
    return run_nn(problem, decomposition, config)


def _solve(spec: RunSpec, output: TextIO) -> RunOutcome:
    n_cells = spec.n_cells[0]
    mesh = make_mesh(n_cells, spec.dim)
    decomposition = spec.decompositions(mesh)[0] if spec.kappa and spec.kappa.startswith("step:") else None
    problem = _build_problem(spec, n_cells, spec.nu[0], decomposition)
    reg = Regularization.parse(spec.reg)

    if reg is Regularization.L2:
        kkt = solve_monolithic_l2_kkt(problem)
        fields = {"state": kkt.y, "adjoint": kkt.p, "control": kkt.u}
    else:
        if spec.grid_field == "adjoint":
            raise ConstraintViolation("field", spec.grid_field, "be state or control under energy-norm regularization")
        y = solve_monolithic_h1(problem)
        fields = {"state": y, "control": recover_control_h1(problem, y)}
    write_grid_csv(fields[spec.grid_field], output)
    return RunOutcome()


def _iterate(spec: RunSpec, output: TextIO) -> RunOutcome:
    method = spec.command
    n_cells = spec.n_cells[0]
    mesh = make_mesh(n_cells, spec.dim)
    decomposition = spec.decompositions(mesh)[0]
    problem = _build_problem(spec, n_cells, spec.nu[0], decomposition)

    outcome = RunOutcome()
    thetas: List[float] = []
    for theta_spec in spec.theta:
        theta = _resolve_theta(spec, method, theta_spec, problem.nu, decomposition)
        if theta_spec == OPTIMAL:
            outcome.resolved_thetas[method] = theta
            log_info(LogEvent.THEORY, "Resolved optimal relaxation parameter", method=method, theta=theta)
        thetas.append(theta)
        outcome.reports.append(run_iteration(problem, decomposition, _iteration_config(spec, method, theta)))

    if len(outcome.reports) == 1:
        report = outcome.reports[0]
        write_rows(output, [("iter", "trace_err", "ratio"), *report.rows()])
        write_rows(output, [("theta", "verdict", "rate"), (thetas[0], report.verdict.value, report.measured_rate)])
    else:
        depth = max(r.iterations for r in outcome.reports)
        header = ["iter"] + [f"theta={format_value(t)}" for t in thetas]
        rows: List[List[Any]] = [header]
        for n in range(1, depth + 1):
            rows.append([n] + [r.records[n - 1].trace_err if n <= r.iterations else None for r in outcome.reports])
        rows.append(["theta", "verdict", "rate"])
        rows.extend([t, r.verdict.value, r.measured_rate] for t, r in zip(thetas, outcome.reports))
        write_rows(output, rows)
    return outcome


def _theory(spec: RunSpec, output: TextIO) -> RunOutcome:
    method = spec.method[0]
    n_cells = spec.n_cells[0]
    mesh = make_mesh(n_cells, 1)
    alpha = _theory_alpha(method, spec.decompositions(mesh)[0].alpha, spec.swap)
    nu = resolve_nu(spec.nu[0], n_cells)
    h = mesh.h if spec.symbol == "discrete" else None

    equioscillation = theta_star_2d(method, nu, alpha, spec.scan_k, spec.symbol, h)
    outcome = RunOutcome()
    thetas: List[float] = []
    for theta_spec in spec.theta:
        if theta_spec == OPTIMAL:
            outcome.resolved_thetas[method] = equioscillation.theta_star
            thetas.append(equioscillation.theta_star)
        else:
            thetas.append(float(theta_spec))

    curves = [rho_curve(method, nu, alpha, theta, spec.scan_k, spec.symbol, h) for theta in thetas]
    header = ["k", "rho"] if len(thetas) == 1 else ["k"] + [f"rho_theta={format_value(t)}" for t in thetas]
    rows: List[List[Any]] = [header]
    rows.extend([k] + [float(c[k]) for c in curves] for k in range(spec.scan_k + 1))
    rows.append([LIMIT] + [rho_2d(method, nu, alpha, t, LIMIT) for t in thetas])
    rows.append(["method", "nu", "alpha", "theta_star", "sup_rho"])
    rows.append([method, nu, alpha, equioscillation.theta_star, equioscillation.sup_rho])
    write_rows(output, rows)
    return outcome


@dataclass(frozen=True)
class SweepCell:
    """One point of a sweep's parameter cross product."""

    method: str
    nu: NuSpec
    n_cells: int
    m: int
    theta: ThetaSpec


@dataclass(frozen=True)
class SweepRow:
    """Summary of one sweep cell."""

    nu: float
    alpha: float
    theta: float
    method: str
    verdict: str
    measured_rate: float
    predicted_rate: float

    def as_row(self) -> Tuple[Any, ...]:
        return (self.nu, self.alpha, self.theta, self.method, self.verdict, self.measured_rate, self.predicted_rate)


SWEEP_HEADER = ("nu", "alpha", "theta", "method", "verdict", "measured_rate", "predicted_rate")


def _sorted_unique(values: Sequence[Any]) -> List[Any]:
    numbers = sorted({v for v in values if not isinstance(v, str)})
    tokens = sorted({v for v in values if isinstance(v, str)})
    return numbers + tokens


def sweep_cells(spec: RunSpec) -> List[SweepCell]:
    """Cross product of the sweep lists, in lexicographic order."""
    cells: List[SweepCell] = []
    for method, nu, n_cells in itertools.product(
        _sorted_unique(spec.method), _sorted_unique(spec.nu), _sorted_unique(spec.n_cells)
    ):
        mesh = make_mesh(n_cells, spec.dim)
        ms = sorted({d.m for d in spec.decompositions(mesh)})
        for m, theta in itertools.product(ms, _sorted_unique(spec.theta)):
            cells.append(SweepCell(method=method, nu=nu, n_cells=n_cells, m=m, theta=theta))
    return cells


def run_cell(spec: RunSpec, cell: SweepCell) -> SweepRow:
    """Run one sweep cell and compare its measured rate with the theory."""
    log_debug(LogEvent.SWEEP, "Sweep cell started", method=cell.method, n_cells=cell.n_cells, m=cell.m)
    decomposition = Decomposition(make_mesh(cell.n_cells, spec.dim), cell.m)
    problem = _build_problem(spec, cell.n_cells, cell.nu, decomposition)
    theta = _resolve_theta(spec, cell.method, cell.theta, problem.nu, decomposition)
    report = run_iteration(problem, decomposition, _iteration_config(spec, cell.method, theta))
    predicted = predicted_rate(
        cell.method,
        problem.nu,
        _theory_alpha(cell.method, decomposition.alpha, spec.swap),
        theta,
        dim=spec.dim,
        mode_k=spec.mode_k,
        scan_k=spec.scan_k,
    )
    log_debug(LogEvent.SWEEP, "Sweep cell finished", method=cell.method, verdict=report.verdict.value)
    return SweepRow(
        nu=problem.nu,
        alpha=decomposition.alpha,
        theta=theta,
        method=cell.method,
        verdict=report.verdict.value,
        measured_rate=report.measured_rate,
        predicted_rate=predicted,
    )


def sweep(spec: RunSpec) -> List[SweepRow]:
    """Run every cell of the sweep, up to ``spec.jobs`` at a time; rows keep cell order."""
    cells = sweep_cells(spec)
    if not cells:
        raise ConstraintViolation("sweep", "[]", "contain at least one cell")
    log_info(LogEvent.SWEEP, "Sweep", cells=len(cells), jobs=spec.jobs)
    if spec.jobs == 1:
        return [run_cell(spec, cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
        return list(pool.map(lambda cell: run_cell(spec, cell), cells))


def _sweep(spec: RunSpec, output: TextIO) -> RunOutcome:
    rows = sweep(spec)
    write_rows(output, [SWEEP_HEADER, *(row.as_row() for row in rows)])
    return RunOutcome()


_DISPATCH = {"solve": _solve, "dn": _iterate, "nn": _iterate, "theory": _theory, "sweep": _sweep}


def run(spec: RunSpec, output: TextIO) -> RunOutcome:
    """Validate ``spec``, run it and write its CSV to ``output``.

    Raises:
        EnergyDDError: On invalid parameters or input data
    """
    spec.validate()
    return _DISPATCH[spec.command](spec, output)

