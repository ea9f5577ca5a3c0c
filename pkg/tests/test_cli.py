"""CLI tests for edd."""

import csv
from pathlib import Path
from typing import List

import click
import pytest
from click.testing import CliRunner

from energy_dd.cli import app, parse_args
from energy_dd.cli.utils.helpers import ExitCode, expand_range
from energy_dd.experiments import RunSpec


@pytest.fixture
def cli_runner() -> CliRunner:
    """Create a Click CLI runner for testing."""
    return CliRunner()


def _read_csv(path: Path) -> List[List[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


class TestExitCodes:
    """Exit status of edd commands."""

    def test_converged_run(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test that a converged DN run exits 0 and echoes the resolved theta."""
        out = tmp_path / "dn.csv"
        result = cli_runner.invoke(app, ["dn", "--N", "99", "--m", "33", "--out", str(out)])
        assert result.exit_code == ExitCode.SUCCESS
        assert "theta[dn] = optimal ->" in result.output
        rows = _read_csv(out)
        assert rows[0] == ["iter", "trace_err", "ratio"]
        assert ["theta", "verdict", "rate"] in rows

    def test_diverged_run(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test that a diverged run exits 2 and still writes its CSV."""
        out = tmp_path / "dn.csv"
        result = cli_runner.invoke(app, ["dn", "--N", "99", "--m", "33", "--theta", "1", "--iters", "15", "-o", str(out)])
        assert result.exit_code == ExitCode.DIVERGED
        assert _read_csv(out)[-1][:2] == ["1", "diverged"]

    def test_unknown_flag(self, cli_runner: CliRunner) -> None:
        """Test that an unknown flag is a usage error."""
        result = cli_runner.invoke(app, ["dn", "--bogus", "1"])
        assert result.exit_code == ExitCode.USAGE_ERROR
        assert "Error:" in result.output

    def test_misaligned_alpha(self, cli_runner: CliRunner) -> None:
        """Test that an interface between nodes is a usage error naming alpha."""
        result = cli_runner.invoke(app, ["dn", "--N", "100", "--alpha", "0.333"])
        assert result.exit_code == ExitCode.USAGE_ERROR
        assert "alpha" in result.output

    @pytest.mark.parametrize("alpha", ["nan", "inf"])
    def test_non_finite_alpha(self, cli_runner: CliRunner, alpha: str) -> None:
        """Test that a non-finite interface position is a usage error naming alpha."""
        result = cli_runner.invoke(app, ["dn", "--N", "99", "--alpha", alpha])
        assert result.exit_code == ExitCode.USAGE_ERROR
        assert "Error:" in result.output
        assert "alpha" in result.output

    def test_empty_range(self, cli_runner: CliRunner) -> None:
        """Test that an empty theta range is a usage error."""
        result = cli_runner.invoke(app, ["sweep", "--theta", "0.9:0.1:0.1"])
        assert result.exit_code == ExitCode.USAGE_ERROR

    def test_constraint_violation(self, cli_runner: CliRunner) -> None:
        """Test that a non-positive regularization weight is a usage error."""
        result = cli_runner.invoke(app, ["solve", "--nu", "0"])
        assert result.exit_code == ExitCode.USAGE_ERROR
        assert "nu" in result.output

    def test_version(self, cli_runner: CliRunner) -> None:
        """Test the version flag."""
        result = cli_runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert "edd version:" in result.output


class TestCommands:
    """Output of each command."""

    def test_solve(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test a 2D state solve."""
        out = tmp_path / "state.csv"
        args = ["solve", "--dim", "2", "--N", "8", "--target", "sine", "--field", "state", "-o", str(out)]
        result = cli_runner.invoke(app, args)
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert rows[0] == ["x1", "x2", "value"]
        assert len(rows) == 82

    def test_solve_to_stdout(self, cli_runner: CliRunner) -> None:
        """Test that CSV goes to stdout without --out."""
        result = cli_runner.invoke(app, ["solve", "--N", "10", "--target", "bump"])
        assert result.exit_code == 0
        assert "x,value" in result.output

    def test_nn_several_thetas(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test one error column per relaxation parameter."""
        out = tmp_path / "nn.csv"
        args = ["nn", "--N", "99", "--m", "33", "--theta", "0.1,0.2", "--iters", "4", "--tol", "1e-30", "-o", str(out)]
        result = cli_runner.invoke(app, args)
        assert result.exit_code == 0
        assert _read_csv(out)[0] == ["iter", "theta=0.10000000000000001", "theta=0.20000000000000001"]

    def test_theory(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test a frequency scan."""
        out = tmp_path / "theory.csv"
        result = cli_runner.invoke(app, ["theory", "--method", "nn", "--N", "99", "--m", "33", "--scan-k", "40", "-o", str(out)])
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert len(rows) == 45
        assert rows[-2] == ["method", "nu", "alpha", "theta_star", "sup_rho"]

    def test_sweep(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test a sweep over methods and relaxation parameters."""
        out = tmp_path / "sweep.csv"
        args = ["sweep", "--method", "dn,nn", "--N", "40", "--m", "20", "--theta", "0.1:0.3:0.1", "--iters", "5", "-o", str(out)]
        result = cli_runner.invoke(app, args)
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert rows[0][:4] == ["nu", "alpha", "theta", "method"]
        assert len(rows) == 1 + 6
        assert [r[3] for r in rows[1:]] == ["dn"] * 3 + ["nn"] * 3

    def test_verbose_table(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test the run summary shown with -v."""
        result = cli_runner.invoke(app, ["-v", "--no-color", "dn", "--N", "20", "--theta", "0.3", "-o", str(tmp_path / "o.csv")])
        assert result.exit_code == 0
        assert "max_iter" in result.output or "converged" in result.output


class TestConfig:
    """Run configuration files."""

    def test_flags_override_config(self, tmp_path: Path) -> None:
        """Test that explicit flags win over config entries."""
        config = tmp_path / "run.conf"
        config.write_text("nu = 0.01\nN = 60\nm = 20\ntheta = 0.3  # relaxed\n")
        spec = parse_args(["dn", "--config", str(config), "--theta", "0.4"])
        assert spec.nu == (0.01,)
        assert spec.n_cells == (60,)
        assert spec.m == (20,)
        assert spec.theta == (0.4,)

    def test_yaml_config(self, tmp_path: Path) -> None:
        """Test a YAML mapping with list values."""
        config = tmp_path / "run.yml"
        config.write_text("method: [dn, nn]\ntheta: [0.2, optimal]\nmax_iter: 7\n")
        spec = parse_args(["sweep", "--config", str(config)])
        assert spec.method == ("dn", "nn")
        assert spec.theta == (0.2, "optimal")
        assert spec.iters == 7

    def test_environment_config(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the config file named by the environment."""
        config = tmp_path / "env.conf"
        config.write_text("swap = true\n")
        monkeypatch.setenv("EDD_CONFIG_PATH", str(config))
        assert parse_args(["dn"]).swap is True

    def test_missing_config(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test that a missing config file is a usage error."""
        result = cli_runner.invoke(app, ["dn", "--config", str(tmp_path / "absent.conf")])
        assert result.exit_code == ExitCode.USAGE_ERROR

    def test_unknown_config_key(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test that an unknown key is a usage error."""
        config = tmp_path / "bad.conf"
        config.write_text("colour = red\n")
        result = cli_runner.invoke(app, ["dn", "--config", str(config)])
        assert result.exit_code == ExitCode.USAGE_ERROR


class TestParseArgs:
    """Parsing without running."""

    def test_defaults(self) -> None:
        """Test the spec of a bare command."""
        spec = parse_args(["nn"])
        assert isinstance(spec, RunSpec)
        assert spec.command == "nn"
        assert spec.theta == ("optimal",)
        assert spec.n_cells == (100,)

    def test_lists_and_tokens(self) -> None:
        """Test list, range and token values."""
        spec = parse_args(["sweep", "--nu", "h2,1", "--m", "10:30:10", "--theta", "optimal,0.5", "-j", "2"])
        assert spec.nu == ("h2", 1.0)
        assert spec.m == (10, 20, 30)
        assert spec.theta == ("optimal", 0.5)
        assert spec.jobs == 2

    def test_rejects_invalid(self) -> None:
        """Test that parse errors surface as click exceptions."""
        with pytest.raises(click.ClickException):
            parse_args(["dn", "--theta", "abc"])
        with pytest.raises(click.ClickException):
            parse_args(["dn", "--nu", "1,2"])


class TestExpandRange:
    """Inclusive ranges."""

    def test_float_range(self) -> None:
        """Test that float steps land on rounded values."""
        assert expand_range("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5]

    def test_int_range(self) -> None:
        """Test an integer range."""
        assert expand_range("2:8:3", integer=True) == [2, 5, 8]

    @pytest.mark.parametrize("text", ["1:0:0.1", "0:1:0", "0:1", "a:b:c"])
    def test_invalid(self, text: str) -> None:
        """Test malformed and empty ranges."""
        with pytest.raises(ValueError):
            expand_range(text)
