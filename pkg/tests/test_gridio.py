"""Tests for grid-function CSV files."""

import io
from pathlib import Path

import numpy as np
import pytest

from energy_dd.errors import GridDataError
from energy_dd.gridio import read_grid_csv, write_grid_csv
from energy_dd.mesh import GridFunction, Mesh1D, Mesh2D


def test_write_1d_format() -> None:
    """Test the 1D header and full-precision rows."""
    mesh = Mesh1D(4)
    buffer = io.StringIO()
    write_grid_csv(GridFunction(mesh, np.array([0.0, 1 / 3, 0.5, 0.25, 0.0])), buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "x,value"
    assert len(lines) == 6
    assert lines[2] == "0.25,0.33333333333333331"


def test_write_2d_layout(tmp_path: Path) -> None:
    """Test the 2D header and the x1-major row order."""
    mesh = Mesh2D(4)
    values = np.arange(25, dtype=float).reshape(5, 5)
    path = tmp_path / "field.csv"
    write_grid_csv(GridFunction(mesh, values), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,value"
    assert lines[2] == "0,0.25,1"
    assert lines[6] == "0.25,0,5"
    np.testing.assert_array_equal(read_grid_csv(path, mesh).values, values)


class TestReadErrors:
    """Rejected grid files."""

    def test_missing(self, tmp_path: Path) -> None:
        """Test a missing file."""
        with pytest.raises(GridDataError):
            read_grid_csv(tmp_path / "missing.csv", Mesh1D(4))

    def test_wrong_header(self, tmp_path: Path) -> None:
        """Test a header of the wrong dimension."""
        path = tmp_path / "field.csv"
        path.write_text("x1,x2,value\n0,0,0\n")
        with pytest.raises(GridDataError) as exc_info:
            read_grid_csv(path, Mesh1D(4))
        assert exc_info.value.path == str(path)

    def test_wrong_coordinates(self, tmp_path: Path) -> None:
        """Test rows whose coordinates do not match the mesh."""
        path = tmp_path / "field.csv"
        path.write_text("x,value\n" + "".join(f"{x},0\n" for x in [0, 0.2, 0.4, 0.6, 1.0]))
        with pytest.raises(GridDataError):
            read_grid_csv(path, Mesh1D(4))

    def test_non_finite(self, tmp_path: Path) -> None:
        """Test non-finite values."""
        path = tmp_path / "field.csv"
        path.write_text("x,value\n0,0\n0.25,nan\n0.5,0\n0.75,0\n1,0\n")
        with pytest.raises(GridDataError):
            read_grid_csv(path, Mesh1D(4))

    def test_malformed(self, tmp_path: Path) -> None:
        """Test unparsable rows."""
        path = tmp_path / "field.csv"
        path.write_text("x,value\n0,zero\n")
        with pytest.raises(GridDataError):
            read_grid_csv(path, Mesh1D(4))
