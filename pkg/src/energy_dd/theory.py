"""Closed-form convergence factors and optimal relaxation parameters.

With ``a = sqrt(lambda + 1/nu)``, where ``lambda = (k*pi)^2`` is the x2
frequency (0 in 1D), one step multiplies the interface error by

- DN: ``1 - theta*(1 + tanh(a*(1-alpha))*coth(a*alpha))``
- NN: ``1 - theta*(tanh(a*alpha) + tanh(a*(1-alpha)))*(coth(a*alpha) + coth(a*(1-alpha)))``

and the convergence factor is the modulus of that multiplier. As ``k`` grows
both brackets tend to 2 (DN) and 4 (NN).

In the discrete symbol mode the x2 eigenvalue is ``(4/h^2)*sin^2(k*pi*h/2)``
and ``a`` is replaced by the root ``mu = (2/h)*asinh(h*a/2)`` of the
three-point recurrence; the factors are then exact for the finite-difference
iterations with half-row fluxes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import bisect, minimize_scalar

from .errors import ConstraintViolation
from .logging import LogEvent, log_debug, log_warning
from .mesh import FloatArray

LIMIT = "limit"

# tanh and coth are 1 to double precision beyond this argument
CLAMP = 40.0

# Endpoint dominance check tolerance for frequency scans
DOMINANCE_TOL = 1e-12

DEFAULT_SCAN_K = 1000

Frequency = Union[int, str]


class Method(str, Enum):
    """Domain-decomposition method."""

    DN = "dn"
    NN = "nn"

    @property
    def limit_bracket(self) -> float:
        """Bracket value as the frequency tends to infinity."""
        return 2.0 if self is Method.DN else 4.0


class SymbolMode(str, Enum):
    """Continuum formulas, or their exact finite-difference counterparts."""

    CONTINUUM = "continuum"
    DISCRETE = "discrete"


def _tanh(x: ArrayLike) -> FloatArray:
    x = np.asarray(x, dtype=float)
    return np.where(x > CLAMP, 1.0, np.tanh(np.minimum(x, CLAMP)))


def _coth(x: ArrayLike) -> FloatArray:
    return 1.0 / _tanh(x)


def _check_domain(nu: float, alpha: float) -> None:
    if not np.isfinite(nu) or nu <= 0.0:
        raise ConstraintViolation("nu", nu, "be positive")
    if not 0.0 < alpha < 1.0:
        raise ConstraintViolation("alpha", alpha, "lie in (0, 1)")


def _scalar(value: FloatArray) -> float:
    return float(np.asarray(value).reshape(()))


def symbol_argument(
    nu: float,
    k: ArrayLike = 0,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
) -> FloatArray:
    """The decay rate ``a`` (continuum) or ``mu`` (discrete) of frequency ``k``.

    Args:
        nu: Regularization weight
        k: Frequency index or array of indices (0 in 1D)
        symbol: Continuum or discrete
        h: Mesh width, required in discrete mode

    Raises:
        ConstraintViolation: If discrete mode is requested without a mesh width
    """
    symbol = SymbolMode(symbol)
    k = np.asarray(k, dtype=float)
    if symbol is SymbolMode.CONTINUUM:
        return np.sqrt((k * np.pi) ** 2 + 1.0 / nu)
    if h is None or not h > 0.0:
        raise ConstraintViolation("h", h, "be a positive mesh width in discrete symbol mode")
    eigenvalue = (4.0 / h**2) * np.sin(k * np.pi * h / 2.0) ** 2
    a = np.sqrt(eigenvalue + 1.0 / nu)
    return (2.0 / h) * np.arcsinh(h * a / 2.0)


def bracket(method: Union[str, Method], a: ArrayLike, alpha: float) -> FloatArray:
    """Bracket ``B`` of the multiplier ``1 - theta*B`` at decay rate ``a``."""
    method = Method(method)
    a = np.asarray(a, dtype=float)
    left = a * alpha
    right = a * (1.0 - alpha)
    if method is Method.DN:
        return 1.0 + _tanh(right) * _coth(left)
    return (_tanh(left) + _tanh(right)) * (_coth(left) + _coth(right))


def _one_dim_bracket(method: Method, nu: float, alpha: float, h: Optional[float]) -> float:
    _check_domain(nu, alpha)
    symbol = SymbolMode.CONTINUUM if h is None else SymbolMode.DISCRETE
    return _scalar(bracket(method, symbol_argument(nu, 0, symbol, h), alpha))


def dn_trace_map(nu: float, alpha: float, theta: float, h: Optional[float] = None) -> float:
    """Signed one-step multiplier of the 1D DN interface error."""
    return 1.0 - theta * _one_dim_bracket(Method.DN, nu, alpha, h)


def nn_trace_map(nu: float, alpha: float, theta: float, h: Optional[float] = None) -> float:
    """Signed one-step multiplier of the 1D NN interface error."""
    return 1.0 - theta * _one_dim_bracket(Method.NN, nu, alpha, h)


def rho_dn_1d(nu: float, alpha: float, theta: float, h: Optional[float] = None) -> float:
    """Convergence factor of the 1D DN iteration; ``h`` selects the discrete factor."""
    return abs(dn_trace_map(nu, alpha, theta, h))


def rho_nn_1d(nu: float, alpha: float, theta: float, h: Optional[float] = None) -> float:
    """Convergence factor of the 1D NN iteration; ``h`` selects the discrete factor."""
    return abs(nn_trace_map(nu, alpha, theta, h))


def theta_star_dn_1d(nu: float, alpha: float, h: Optional[float] = None) -> float:
    """Relaxation parameter annihilating the 1D DN error in one trace update.

    Examples:
        >>> round(theta_star_dn_1d(1.0, 1 / 3), 5)
        0.35554
    """
    return 1.0 / _one_dim_bracket(Method.DN, nu, alpha, h)


def theta_star_nn_1d(nu: float, alpha: float, h: Optional[float] = None) -> float:
    """Relaxation parameter annihilating the 1D NN error in one trace update."""
    return 1.0 / _one_dim_bracket(Method.NN, nu, alpha, h)


def theta_star_1d(method: Union[str, Method], nu: float, alpha: float, h: Optional[float] = None) -> float:
    """Optimal 1D relaxation parameter of either method."""
    if Method(method) is Method.DN:
        return theta_star_dn_1d(nu, alpha, h)
    return theta_star_nn_1d(nu, alpha, h)


def rho_1d(method: Union[str, Method], nu: float, alpha: float, theta: float, h: Optional[float] = None) -> float:
    """1D convergence factor of either method."""
    if Method(method) is Method.DN:
        return rho_dn_1d(nu, alpha, theta, h)
    return rho_nn_1d(nu, alpha, theta, h)


def convergence_interval(
    method: Union[str, Method], nu: float, alpha: float, h: Optional[float] = None
) -> Tuple[float, float]:
    """Open interval ``(0, 2*theta_star)`` of relaxation parameters with ``rho < 1``."""
    return 0.0, 2.0 * theta_star_1d(method, nu, alpha, h)


def dn_converges_unrelaxed(nu: float, alpha: float) -> bool:
    """Whether DN converges without relaxation (``theta = 1``); true exactly when ``alpha > 1/2``."""
    return rho_dn_1d(nu, alpha, 1.0) < 1.0


@dataclass(frozen=True)
class FactorQuery:
    """A point at which to evaluate a convergence factor.

    Attributes:
        method: DN or NN
        nu: Regularization weight
        alpha: Interface position
        theta: Relaxation parameter
        k: x2 frequency (2D), ``"limit"``, or None for the 1D factor
        symbol: Continuum or discrete formulas
        h: Mesh width for the discrete symbol
    """

    method: Method
    nu: float
    alpha: float
    theta: float
    k: Optional[Frequency] = None
    symbol: SymbolMode = SymbolMode.CONTINUUM
    h: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "symbol", SymbolMode(self.symbol))
        _check_domain(self.nu, self.alpha)
        if self.k is not None and self.k != LIMIT and (isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0):
            raise ConstraintViolation("k", self.k, "be a nonnegative integer or 'limit'")

    def multiplier(self) -> float:
        """Signed one-step multiplier."""
        if self.k == LIMIT:
            return 1.0 - self.theta * self.method.limit_bracket
        k = 0 if self.k is None else int(self.k)
        a = symbol_argument(self.nu, k, self.symbol, self.h)
        return 1.0 - self.theta * _scalar(bracket(self.method, a, self.alpha))

    def rho(self) -> float:
        """Convergence factor."""
        return abs(self.multiplier())


def rho_2d(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    theta: float,
    k: Frequency,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
) -> float:
    """Convergence factor of the 2D iteration on x2 frequency ``k`` (or ``"limit"``).

    Examples:
        >>> round(rho_2d("dn", 1.0, 1 / 3, 0.414, LIMIT), 5)
        0.172
    """
    return FactorQuery(Method(method), nu, alpha, theta, k, SymbolMode(symbol), h).rho()


def rho_curve(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    theta: float,
    scan_k: int = DEFAULT_SCAN_K,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
) -> FloatArray:
    """Convergence factors at ``k = 0..scan_k``."""
    _check_domain(nu, alpha)
    if isinstance(scan_k, bool) or int(scan_k) != scan_k or scan_k < 0:
        raise ConstraintViolation("scan_k", scan_k, "be a nonnegative integer")
    k = np.arange(int(scan_k) + 1)
    return np.abs(1.0 - theta * bracket(method, symbol_argument(nu, k, symbol, h), alpha))


@dataclass(frozen=True)
class SupResult:
    """Supremum of the convergence factor over the scanned frequencies.

    Attributes:
        sup: Largest factor, the limit included
        argmax_k: Frequency attaining it, or ``"limit"``
        rho_at_zero: Factor at ``k = 0``
        rho_at_limit: Factor as ``k`` tends to infinity
        endpoint_dominated: Whether no scanned frequency exceeds both endpoints
    """

    sup: float
    argmax_k: Frequency
    rho_at_zero: float
    rho_at_limit: float
    endpoint_dominated: bool


def sup_rho_2d(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    theta: float,
    scan_k: int = DEFAULT_SCAN_K,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
) -> SupResult:
    """Scan ``k = 0..scan_k`` plus the limit and return the largest factor."""
    method = Method(method)
    curve = rho_curve(method, nu, alpha, theta, scan_k, symbol, h)
    at_limit = abs(1.0 - theta * method.limit_bracket)
    at_zero = float(curve[0])
    k_max = int(np.argmax(curve))
    endpoints = max(at_zero, at_limit)
    dominated = bool(np.all(curve <= endpoints + DOMINANCE_TOL))
    if not dominated:
        log_warning(
            LogEvent.THEORY,
            "Convergence factor peaks inside the frequency range",
            method=method.value,
            theta=theta,
            k=k_max,
        )
    if at_limit >= curve[k_max]:
        return SupResult(at_limit, LIMIT, at_zero, at_limit, dominated)
    return SupResult(float(curve[k_max]), k_max, at_zero, at_limit, dominated)


@dataclass(frozen=True)
class EquioscillationResult:
    """Relaxation parameter equalizing the factor at ``k = 0`` and in the limit.

    Attributes:
        theta_star: Optimal relaxation parameter
        rho_at_zero: Factor at ``k = 0``
        rho_at_limit: Factor in the limit
        sup_rho: Supremum over all frequencies at ``theta_star``
        argmax_k: Frequency attaining the supremum
        fallback_used: Whether golden-section minimization replaced the bisection
    """

    theta_star: float
    rho_at_zero: float
    rho_at_limit: float
    sup_rho: float
    argmax_k: Frequency
    fallback_used: bool = False


def theta_star_2d(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    scan_k: int = DEFAULT_SCAN_K,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
) -> EquioscillationResult:
    """Equioscillate the 2D factor between ``k = 0`` and the limit.

    The crossing of ``|1 - theta*B0|`` and ``|1 - theta*Binf|`` is bracketed by
    ``1/B0`` and ``1/Binf`` and located by bisection; it equals
    ``2/(B0 + Binf)``. If the scan shows an interior peak the supremum is
    minimized by golden-section search instead.

    Examples:
        >>> round(theta_star_2d("dn", 1.0, 1 / 3).theta_star, 5)
        0.41557
    """
    method = Method(method)
    _check_domain(nu, alpha)
    b_zero = _scalar(bracket(method, symbol_argument(nu, 0, symbol, h), alpha))
    b_limit = method.limit_bracket
    closed_form = 2.0 / (b_zero + b_limit)

    def gap(theta: float) -> float:
        return abs(1.0 - theta * b_zero) - abs(1.0 - theta * b_limit)

    fallback = False
    lo, hi = sorted((1.0 / b_zero, 1.0 / b_limit))
    if hi - lo <= 1e-15:
        theta_star = closed_form
    else:
        try:
            theta_star = float(bisect(gap, lo, hi, xtol=1e-12))
        except ValueError:
            log_warning(LogEvent.THEORY, "No sign change in the equioscillation bracket", lo=lo, hi=hi)
            theta_star = closed_form
            fallback = True
        if abs(theta_star - closed_form) > 1e-10:
            log_warning(
                LogEvent.THEORY, "Bisection disagrees with the closed form", bisection=theta_star, closed=closed_form
            )

    result = sup_rho_2d(method, nu, alpha, theta_star, scan_k, symbol, h)
    if fallback or not result.endpoint_dominated:
        fallback = True
        search = minimize_scalar(
            lambda theta: sup_rho_2d(method, nu, alpha, theta, scan_k, symbol, h).sup,
            bracket=(0.0, theta_star, 1.0),
            method="golden",
        )
        theta_star = float(search.x)
        result = sup_rho_2d(method, nu, alpha, theta_star, scan_k, symbol, h)

    log_debug(
        LogEvent.THEORY,
        "Equioscillation",
        method=method.value,
        nu=nu,
        alpha=alpha,
        theta_star=theta_star,
        sup_rho=result.sup,
    )
    return EquioscillationResult(
        theta_star=theta_star,
        rho_at_zero=result.rho_at_zero,
        rho_at_limit=result.rho_at_limit,
        sup_rho=result.sup,
        argmax_k=result.argmax_k,
        fallback_used=fallback,
    )


def optimal_theta(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    dim: int = 1,
    symbol: Union[str, SymbolMode] = SymbolMode.CONTINUUM,
    h: Optional[float] = None,
    mode_k: Optional[int] = None,
    scan_k: int = DEFAULT_SCAN_K,
) -> float:
    """Resolve ``theta="optimal"``: the 1D optimum, the optimum of a single 2D mode, or the 2D equioscillation."""
    discrete_h = h if SymbolMode(symbol) is SymbolMode.DISCRETE else None
    if dim == 1:
        return theta_star_1d(method, nu, alpha, discrete_h)
    if mode_k is not None:
        a = symbol_argument(nu, mode_k, symbol, h)
        return 1.0 / _scalar(bracket(method, a, alpha))
    return theta_star_2d(method, nu, alpha, scan_k, symbol, h).theta_star


def predicted_rate(
    method: Union[str, Method],
    nu: float,
    alpha: float,
    theta: float,
    dim: int = 1,
    mode_k: Optional[int] = None,
    scan_k: int = DEFAULT_SCAN_K,
) -> float:
    """Continuum convergence factor a run with these parameters is expected to show."""
    if dim == 1:
        return rho_1d(method, nu, alpha, theta)
    if mode_k is not None:
        return rho_2d(method, nu, alpha, theta, mode_k)
    return sup_rho_2d(method, nu, alpha, theta, scan_k).sup
