"""End-to-end checks of the iterations against the closed-form theory."""

import numpy as np
import pytest

from energy_dd.dn import run_dn, run_dn_2d
from energy_dd.iteration import DNConfig, NNConfig, Verdict
from energy_dd.mesh import Decomposition, Mesh1D, Mesh2D
from energy_dd.model import (
    apply_state_operator,
    kkt_residual,
    monolithic_residual,
    recover_control_h1,
    regularization_contrast,
    solve_monolithic_h1,
    solve_monolithic_l2_kkt,
)
from energy_dd.nn import run_nn, run_nn_2d
from energy_dd.problem import make_problem
from energy_dd.theory import (
    rho_2d,
    rho_dn_1d,
    rho_nn_1d,
    theta_star_2d,
    theta_star_dn_1d,
    theta_star_nn_1d,
)


def _error_setup(n: int, m: int, nu: float = 1.0):  # type: ignore[no-untyped-def]
    mesh = Mesh1D(n)
    return make_problem(mesh, nu), Decomposition(mesh, m)


class TestOptimalRelaxation1D:
    """Optimal relaxation parameters on the interval."""

    def test_reference_values(self) -> None:
        """Test the optimal parameters at nu = 1, alpha = 1/3."""
        assert theta_star_dn_1d(1.0, 1 / 3) == pytest.approx(0.35554, abs=1e-5)
        assert theta_star_nn_1d(1.0, 1 / 3) == pytest.approx(0.22913, abs=1e-5)
        # published values are rounded to three digits
        assert theta_star_dn_1d(1.0, 1 / 3) == pytest.approx(0.355, abs=1e-3)
        assert theta_star_nn_1d(1.0, 1 / 3) == pytest.approx(0.229, abs=1e-3)

    @pytest.mark.parametrize(
        "method,run,config_cls,theta_star",
        [
            ("dn", run_dn, DNConfig, theta_star_dn_1d),
            ("nn", run_nn, NNConfig, theta_star_nn_1d),
        ],
    )
    def test_two_step_convergence(self, method: str, run, config_cls, theta_star) -> None:  # type: ignore[no-untyped-def]
        """Test that the optimal parameter converges in two iterations."""
        problem, decomposition = _error_setup(999, 333)
        continuum = run(problem, decomposition, config_cls(theta=theta_star(1.0, 1 / 3), tol=1e-30, max_iter=2))
        assert continuum.error_after(2) <= 1e-6

        exact = run(problem, decomposition, config_cls(theta=theta_star(1.0, 1 / 3, h=1 / 999), tol=1e-30, max_iter=2))
        assert exact.error_after(2) <= 1e-12


class TestSymmetricInterface:
    """Centred interface: the factor does not depend on nu."""

    @pytest.mark.parametrize("theta", [0.1, 0.25, 0.5, 0.75])
    @pytest.mark.parametrize("nu", [1e-4, 1.0, 1e4])
    def test_dn_ratio(self, nu: float, theta: float) -> None:
        """Test that the DN ratio is |1 - 2 theta|."""
        problem, decomposition = _error_setup(100, 50, nu)
        report = run_dn(problem, decomposition, DNConfig(theta=theta, tol=1e-30, max_iter=3))
        assert report.records[0].ratio == pytest.approx(abs(1 - 2 * theta), abs=1e-10)
        if theta != 0.5:
            assert report.records[1].ratio == pytest.approx(abs(1 - 2 * theta), abs=1e-10)

    @pytest.mark.parametrize("theta", [0.1, 0.25, 0.5, 0.75])
    @pytest.mark.parametrize("nu", [1e-4, 1.0, 1e4])
    def test_nn_ratio(self, nu: float, theta: float) -> None:
        """Test that the NN ratio is |1 - 4 theta|."""
        problem, decomposition = _error_setup(100, 50, nu)
        report = run_nn(problem, decomposition, NNConfig(theta=theta, tol=1e-30, max_iter=3))
        assert report.records[0].ratio == pytest.approx(abs(1 - 4 * theta), abs=1e-10)
        if theta != 0.25:
            assert report.records[1].ratio == pytest.approx(abs(1 - 4 * theta), abs=1e-10)

    def test_optimal_parameters_converge_at_once(self) -> None:
        """Test theta = 1/2 for DN and theta = 1/4 for NN."""
        problem, decomposition = _error_setup(100, 50, 1e-2)
        dn = run_dn(problem, decomposition, DNConfig(theta=0.5, tol=1e-12))
        nn = run_nn(problem, decomposition, NNConfig(theta=0.25, tol=1e-12))
        for report in (dn, nn):
            assert report.converged
            assert report.iterations <= 2
            assert report.final_error <= 1e-12


class TestUnrelaxedDN:
    """DN without relaxation depends on which side is smaller."""

    def test_dichotomy(self) -> None:
        """Test divergence for alpha = 1/3 and convergence for alpha = 2/3."""
        problem, left = _error_setup(300, 100)
        _, right = _error_setup(300, 200)
        diverging = run_dn(problem, left, DNConfig(theta=1.0))
        converging = run_dn(problem, right, DNConfig(theta=1.0))
        assert diverging.verdict is Verdict.DIVERGED
        assert diverging.measured_rate == pytest.approx(1.813, abs=0.01)
        assert converging.verdict is Verdict.CONVERGED
        assert converging.measured_rate == pytest.approx(0.5517, abs=0.005)


class TestNNDivergence:
    """NN with too large a relaxation parameter."""

    @pytest.mark.parametrize("theta,rate", [(0.5, 1.182), (0.7, 2.055)])
    def test_diverges(self, theta: float, rate: float) -> None:
        """Test the verdict and rate beyond twice the optimal parameter."""
        assert theta > 2 * theta_star_nn_1d(1.0, 1 / 3)
        problem, decomposition = _error_setup(99, 33)
        report = run_nn(problem, decomposition, NNConfig(theta=theta))
        assert report.verdict is Verdict.DIVERGED
        assert report.measured_rate == pytest.approx(rate, abs=0.02)


class TestDiscretizationOrder:
    """Gap between the discrete and continuum factors."""

    @pytest.mark.parametrize("rho", [rho_dn_1d, rho_nn_1d])
    def test_second_order(self, rho) -> None:  # type: ignore[no-untyped-def]
        """Test that halving h quarters the gap."""
        gaps = [abs(rho(1.0, 1 / 3, 0.5, h=1 / n) - rho(1.0, 1 / 3, 0.5)) for n in (100, 200)]
        assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=0.15)

    def test_measured_gap(self) -> None:
        """Test the same order on measured DN rates."""
        gaps = []
        for n in (99, 198):
            problem, decomposition = _error_setup(n, n // 3)
            report = run_dn(problem, decomposition, DNConfig(theta=0.5, tol=1e-30, max_iter=2))
            gaps.append(abs(report.records[0].ratio - rho_dn_1d(1.0, 1 / 3, 0.5)))
        assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=0.15)


class TestTwoDimensional:
    """Unit square."""

    @pytest.mark.parametrize(
        "method,theta,sup",
        [("dn", 0.4156, 0.1689), ("nn", 0.2391, 0.0436)],
    )
    def test_equioscillation(self, method: str, theta: float, sup: float) -> None:
        """Test the equioscillation parameters and suprema."""
        result = theta_star_2d(method, 1.0, 1 / 3)
        assert result.theta_star == pytest.approx(theta, abs=1e-4)
        assert result.sup_rho == pytest.approx(sup, abs=1e-4)
        assert result.rho_at_zero == pytest.approx(result.rho_at_limit, abs=1e-10)

    def test_zero_frequency_is_the_interval(self) -> None:
        """Test the k = 0 end of the scan against a 1D run, which has no x2 frequency."""
        mesh = Mesh1D(96)
        report = run_dn(make_problem(mesh, 1.0), Decomposition(mesh, 32), DNConfig(theta=0.414, tol=1e-30, max_iter=3))
        expected = rho_2d("dn", 1.0, 1 / 3, 0.414, 0, symbol="discrete", h=mesh.h)
        for record in report.records:
            assert record.ratio == pytest.approx(expected, abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [1, 3])
    def test_mode_rates(self, k: int) -> None:
        """Test per-mode contraction on a fine mesh."""
        mesh = Mesh2D(96)
        report = run_dn_2d(
            make_problem(mesh, 1.0), Decomposition(mesh, 32), DNConfig(theta=0.414, mode_k=k, tol=1e-30, max_iter=3)
        )
        discrete = rho_2d("dn", 1.0, 1 / 3, 0.414, k, symbol="discrete", h=mesh.h)
        continuum = rho_2d("dn", 1.0, 1 / 3, 0.414, k)
        for record in report.records:
            assert record.ratio == pytest.approx(discrete, abs=1e-9)
        assert report.measured_rate == pytest.approx(continuum, abs=2e-3)
        if k == 1:
            assert continuum == pytest.approx(0.0812, abs=1e-4)


class TestOracle:
    """Agreement of converged iterations with the monolithic solution."""

    @pytest.mark.parametrize("method", ["dn", "nn"])
    def test_1d(self, method: str) -> None:
        """Test converged 1D runs on the x(1-x) target."""
        mesh = Mesh1D(99)
        problem = make_problem(mesh, 1.0, "bump")
        decomposition = Decomposition(mesh, 33)
        if method == "dn":
            report = run_dn(problem, decomposition, DNConfig(theta=theta_star_dn_1d(1.0, 1 / 3), tol=1e-12))
        else:
            report = run_nn(problem, decomposition, NNConfig(theta=theta_star_nn_1d(1.0, 1 / 3), tol=1e-12))
        assert report.converged
        reference = solve_monolithic_h1(problem)
        assert report.solution is not None
        assert np.max(np.abs(report.solution.values - reference.values)) <= 1e-9

    @pytest.mark.parametrize("method", ["dn", "nn"])
    def test_2d(self, method: str) -> None:
        """Test converged 2D runs on the product bump target."""
        mesh = Mesh2D(30)
        problem = make_problem(mesh, 1e-1, "bump")
        decomposition = Decomposition(mesh, 10)
        theta = theta_star_2d(method, 1e-1, 1 / 3).theta_star
        if method == "dn":
            report = run_dn_2d(problem, decomposition, DNConfig(theta=theta, tol=1e-12, max_iter=100))
        else:
            report = run_nn_2d(problem, decomposition, NNConfig(theta=theta, tol=1e-12, max_iter=100))
        assert report.converged
        assert report.solution is not None
        assert np.max(np.abs(report.solution.values - solve_monolithic_h1(problem).values)) <= 1e-9

    def test_recovered_control_drives_the_state(self) -> None:
        """Test that the recovered control reproduces the state through the state equation."""
        problem = make_problem(Mesh2D(20), 1e-2, "bump")
        y = solve_monolithic_h1(problem)
        u = recover_control_h1(problem, y)
        interior = ~problem.mesh.boundary_mask()
        residual = apply_state_operator(problem, y).values - u.values
        assert np.max(np.abs(residual[interior])) <= 1e-10 * max(1.0, np.max(np.abs(u.values)))


class TestRegularizationContrast:
    """The two regularizations give different controls."""

    def test_controls_differ(self) -> None:
        """Test the L2 and energy-norm controls of the same problem."""
        problem = make_problem(Mesh1D(256), 1.0, "bump")
        contrast = regularization_contrast(problem)
        assert contrast.difference > 1e-3
        assert kkt_residual(problem, solve_monolithic_l2_kkt(problem)) <= 1e-10
        assert monolithic_residual(problem, solve_monolithic_h1(problem)) <= 1e-10
