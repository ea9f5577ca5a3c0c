"""Tests for the closed-form convergence factors."""

import doctest

import numpy as np
import pytest

from energy_dd import theory
from energy_dd.errors import ConstraintViolation
from energy_dd.theory import (
    LIMIT,
    FactorQuery,
    Method,
    bracket,
    convergence_interval,
    dn_converges_unrelaxed,
    dn_trace_map,
    nn_trace_map,
    optimal_theta,
    predicted_rate,
    rho_1d,
    rho_2d,
    rho_curve,
    rho_dn_1d,
    rho_nn_1d,
    sup_rho_2d,
    symbol_argument,
    theta_star_1d,
    theta_star_2d,
    theta_star_dn_1d,
    theta_star_nn_1d,
)


def test_docstring_examples() -> None:
    """Test that the examples in the module docstrings hold."""
    result = doctest.testmod(theory)
    assert result.attempted >= 3
    assert result.failed == 0


class TestOneDimensional:
    """1D factors and optimal relaxation."""

    def test_reference_values(self) -> None:
        """Test the optimal parameters at nu = 1, alpha = 1/3."""
        assert theta_star_dn_1d(1.0, 1 / 3) == pytest.approx(0.35554, abs=1e-5)
        assert theta_star_nn_1d(1.0, 1 / 3) == pytest.approx(0.22913, abs=1e-5)

    @pytest.mark.parametrize("nu", [1e-4, 1e-2, 1.0, 1e2, 1e4])
    @pytest.mark.parametrize("alpha", [0.1, 1 / 3, 0.5, 0.8])
    def test_optimum_annihilates(self, nu: float, alpha: float) -> None:
        """Test that the optimal parameter gives a zero factor."""
        assert rho_dn_1d(nu, alpha, theta_star_dn_1d(nu, alpha)) < 1e-12
        assert rho_nn_1d(nu, alpha, theta_star_nn_1d(nu, alpha)) < 1e-12

    @pytest.mark.parametrize("nu", [1e-4, 1.0, 1e4])
    @pytest.mark.parametrize("theta", [0.1, 0.3, 0.5, 0.9])
    def test_symmetric_interface(self, nu: float, theta: float) -> None:
        """Test the factors |1 - 2 theta| and |1 - 4 theta| at alpha = 1/2."""
        assert rho_dn_1d(nu, 0.5, theta) == pytest.approx(abs(1 - 2 * theta), abs=1e-14)
        assert rho_nn_1d(nu, 0.5, theta) == pytest.approx(abs(1 - 4 * theta), abs=1e-14)

    def test_signed_maps(self) -> None:
        """Test that the factors are the moduli of the signed multipliers."""
        assert dn_trace_map(1.0, 1 / 3, 1.0) < -1.0
        assert rho_dn_1d(1.0, 1 / 3, 1.0) == pytest.approx(-dn_trace_map(1.0, 1 / 3, 1.0))
        assert nn_trace_map(1.0, 0.5, 0.1) == pytest.approx(0.6)

    def test_large_arguments_are_finite(self) -> None:
        """Test that tiny nu does not overflow the hyperbolic functions."""
        assert rho_dn_1d(1e-10, 0.3, 0.5) == pytest.approx(0.0, abs=1e-12)
        assert theta_star_nn_1d(1e-10, 0.3) == pytest.approx(0.25)

    @pytest.mark.parametrize("nu", [1e-300, 1e300])
    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_extreme_nu_is_finite(self, nu: float, alpha: float) -> None:
        """Test that the factors and optima stay finite at the ends of the float range."""
        for method in ("dn", "nn"):
            theta_star = theta_star_1d(method, nu, alpha)
            assert np.isfinite(theta_star) and 0.0 < theta_star < 1.0
            for theta in (0.1, 0.5, theta_star):
                assert np.isfinite(rho_1d(method, nu, alpha, theta))
            assert np.isfinite(rho_2d(method, nu, alpha, theta_star, 5))
        # boundary-layer and diffusion-dominated limits
        if nu < 1.0:
            assert theta_star_dn_1d(nu, alpha) == pytest.approx(0.5)
            assert theta_star_nn_1d(nu, alpha) == pytest.approx(0.25)
        else:
            assert theta_star_dn_1d(nu, alpha) == pytest.approx(alpha)
            assert theta_star_nn_1d(nu, alpha) == pytest.approx(alpha * (1.0 - alpha))

    def test_dispatch(self) -> None:
        """Test the method-generic wrappers."""
        assert theta_star_1d("dn", 1.0, 0.4) == theta_star_dn_1d(1.0, 0.4)
        assert theta_star_1d(Method.NN, 1.0, 0.4) == theta_star_nn_1d(1.0, 0.4)
        assert rho_1d("nn", 1.0, 0.4, 0.2) == rho_nn_1d(1.0, 0.4, 0.2)

    @pytest.mark.parametrize(
        "nu,alpha",
        [(0.0, 0.5), (-1.0, 0.5), (1.0, 0.0), (1.0, 1.0), (1.0, 1.5)],
    )
    def test_domain(self, nu: float, alpha: float) -> None:
        """Test parameter checks."""
        with pytest.raises(ConstraintViolation):
            theta_star_dn_1d(nu, alpha)

    def test_double_optimum_is_neutral(self) -> None:
        """Test that the factor equals one at twice the optimal parameter."""
        rng = np.random.default_rng(7)
        for nu, alpha in zip(10.0 ** rng.uniform(-4, 4, 50), rng.uniform(0.05, 0.95, 50)):
            assert rho_dn_1d(nu, alpha, 2.0 * theta_star_dn_1d(nu, alpha)) == pytest.approx(1.0, abs=1e-12)
            assert rho_nn_1d(nu, alpha, 2.0 * theta_star_nn_1d(nu, alpha)) == pytest.approx(1.0, abs=1e-12)

    def test_convergence_interval(self) -> None:
        """Test that the factor is below one exactly inside (0, 2 theta*)."""
        lo, hi = convergence_interval("dn", 1.0, 0.3)
        assert lo == 0.0
        assert rho_dn_1d(1.0, 0.3, hi * 0.999) < 1.0
        assert rho_dn_1d(1.0, 0.3, hi * 1.001) > 1.0

    @pytest.mark.parametrize("alpha,expected", [(0.3, False), (0.5, False), (0.51, True), (0.8, True)])
    def test_unrelaxed_dn(self, alpha: float, expected: bool) -> None:
        """Test that DN without relaxation converges exactly when alpha > 1/2."""
        assert dn_converges_unrelaxed(1.0, alpha) is expected


class TestDiscreteSymbol:
    """Finite-difference counterparts of the factors."""

    def test_root_approaches_continuum(self) -> None:
        """Test that mu tends to a as h tends to zero."""
        a = float(symbol_argument(1.0, 0))
        mu_coarse = float(symbol_argument(1.0, 0, "discrete", 1 / 20))
        mu_fine = float(symbol_argument(1.0, 0, "discrete", 1 / 40))
        assert abs(mu_fine - a) < abs(mu_coarse - a)
        assert (mu_coarse - a) / (mu_fine - a) == pytest.approx(4.0, rel=0.01)

    def test_requires_h(self) -> None:
        """Test that the discrete mode needs a mesh width."""
        with pytest.raises(ConstraintViolation):
            symbol_argument(1.0, 3, "discrete")

    def test_discrete_theta_close(self) -> None:
        """Test that the discrete optimum is an O(h^2) perturbation."""
        continuum = theta_star_dn_1d(1.0, 1 / 3)
        discrete = theta_star_dn_1d(1.0, 1 / 3, h=1 / 99)
        assert discrete != continuum
        assert discrete == pytest.approx(continuum, abs=1e-4)


class TestTwoDimensional:
    """Frequency-dependent factors."""

    def test_brackets_tend_to_limits(self) -> None:
        """Test that the brackets approach 2 (DN) and 4 (NN)."""
        a = symbol_argument(1.0, 200)
        assert float(bracket("dn", a, 0.3)) == pytest.approx(2.0, abs=1e-12)
        assert float(bracket("nn", a, 0.3)) == pytest.approx(4.0, abs=1e-12)

    def test_k_zero_matches_1d(self) -> None:
        """Test that the k = 0 factor is the 1D factor."""
        assert rho_2d("nn", 1.0, 0.3, 0.2, 0) == pytest.approx(rho_nn_1d(1.0, 0.3, 0.2))

    def test_limit(self) -> None:
        """Test the limit factors."""
        assert rho_2d("dn", 1.0, 0.3, 0.3, LIMIT) == pytest.approx(0.4)
        assert rho_2d("nn", 1.0, 0.3, 0.3, LIMIT) == pytest.approx(0.2)

    def test_invalid_frequency(self) -> None:
        """Test that frequencies are nonnegative integers."""
        with pytest.raises(ConstraintViolation):
            FactorQuery(Method.DN, 1.0, 0.3, 0.3, k=-1)
        with pytest.raises(ConstraintViolation):
            FactorQuery(Method.DN, 1.0, 0.3, 0.3, k=1.5)  # type: ignore[arg-type]

    def test_curve(self) -> None:
        """Test the scan length and its first entry."""
        curve = rho_curve("dn", 1.0, 1 / 3, 0.4, scan_k=40)
        assert curve.shape == (41,)
        assert curve[0] == pytest.approx(rho_dn_1d(1.0, 1 / 3, 0.4))

    def test_reference_equioscillation(self) -> None:
        """Test the equioscillating parameters and their factors at nu = 1, alpha = 1/3."""
        dn = theta_star_2d("dn", 1.0, 1 / 3)
        nn = theta_star_2d("nn", 1.0, 1 / 3)
        assert dn.theta_star == pytest.approx(0.414, abs=2e-3)
        assert nn.theta_star == pytest.approx(0.239, abs=1e-3)
        assert dn.sup_rho == pytest.approx(1.0 - 2.0 * dn.theta_star)
        assert nn.sup_rho == pytest.approx(1.0 - 4.0 * nn.theta_star)
        assert dn.sup_rho == pytest.approx(0.173, abs=5e-3)
        assert nn.sup_rho == pytest.approx(0.046, abs=5e-3)
        assert not dn.fallback_used

    @pytest.mark.parametrize("method", ["dn", "nn"])
    @pytest.mark.parametrize("nu,alpha", [(1.0, 1 / 3), (1e-2, 0.25), (1e2, 0.7)])
    def test_equioscillation(self, method: str, nu: float, alpha: float) -> None:
        """Test that both ends balance and bound the whole scan."""
        result = theta_star_2d(method, nu, alpha, scan_k=200)
        assert result.rho_at_zero == pytest.approx(result.rho_at_limit, abs=1e-10)
        curve = rho_curve(method, nu, alpha, result.theta_star, scan_k=200)
        assert np.all(curve <= result.sup_rho + 1e-12)

    def test_closed_form(self) -> None:
        """Test the closed form 2/(B0 + Binf)."""
        b_zero = float(bracket("nn", symbol_argument(1.0, 0), 0.4))
        assert theta_star_2d("nn", 1.0, 0.4).theta_star == pytest.approx(2.0 / (b_zero + 4.0), abs=1e-11)

    def test_sup(self) -> None:
        """Test the supremum bookkeeping."""
        result = sup_rho_2d("dn", 1.0, 1 / 3, 0.9, scan_k=50)
        assert result.sup == pytest.approx(max(result.rho_at_zero, result.rho_at_limit))
        assert result.endpoint_dominated


class TestResolution:
    """Resolving theta=optimal and predicted rates."""

    def test_optimal_theta(self) -> None:
        """Test the 1D, single-mode and equioscillation branches."""
        assert optimal_theta("dn", 1.0, 1 / 3) == pytest.approx(theta_star_dn_1d(1.0, 1 / 3))
        assert optimal_theta("dn", 1.0, 1 / 3, dim=2) == pytest.approx(theta_star_2d("dn", 1.0, 1 / 3).theta_star)
        single = optimal_theta("nn", 1.0, 1 / 3, dim=2, mode_k=3)
        assert rho_2d("nn", 1.0, 1 / 3, single, 3) == pytest.approx(0.0, abs=1e-12)

    def test_predicted_rate(self) -> None:
        """Test that predicted rates agree with the factor functions."""
        assert predicted_rate("nn", 1.0, 0.3, 0.2) == rho_nn_1d(1.0, 0.3, 0.2)
        assert predicted_rate("dn", 1.0, 0.3, 0.4, dim=2, mode_k=2) == rho_2d("dn", 1.0, 0.3, 0.4, 2)
        assert predicted_rate("dn", 1.0, 0.3, 0.4, dim=2) == sup_rho_2d("dn", 1.0, 0.3, 0.4).sup
