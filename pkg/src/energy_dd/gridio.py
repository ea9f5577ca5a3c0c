"""CSV serialization of grid functions.

Format: header ``x,value`` (1D) or ``x1,x2,value`` (2D), one row per node in
row-major order (x1 outer), values written with 17 significant digits.
"""

from pathlib import Path
from typing import TextIO, Union

import numpy as np

from .errors import GridDataError
from .mesh import GridFunction, Mesh

FLOAT_FORMAT = "%.17g"
COORD_TOL = 1e-9


def grid_header(dim: int) -> str:
    """CSV header for a grid function of the given dimension."""
    return "x,value" if dim == 1 else "x1,x2,value"


def write_grid_csv(gf: GridFunction, output: Union[str, Path, TextIO]) -> None:
    """Write a grid function as CSV to a path or an open text stream."""
    columns = [c.ravel() for c in gf.mesh.coordinates()] + [gf.values.ravel()]
    np.savetxt(
        output,
        np.column_stack(columns),
        fmt=FLOAT_FORMAT,
        delimiter=",",
        header=grid_header(gf.mesh.dim),
        comments="",
    )


def read_grid_csv(path: Union[str, Path], mesh: Mesh) -> GridFunction:
    """Read a grid function written by :func:`write_grid_csv`.

    Raises:
        GridDataError: If the file is missing, has the wrong header, row count
            or coordinates, or holds non-finite values
    """
    path = Path(path)
    if not path.is_file():
        raise GridDataError(f"grid file not found: {path}", str(path))

    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip().replace(" ", "")
        if header != grid_header(mesh.dim):
            raise GridDataError(f"expected header '{grid_header(mesh.dim)}', got '{header}'", str(path))
        try:
            data = np.loadtxt(f, delimiter=",", ndmin=2)
        except ValueError as e:
            raise GridDataError(f"malformed grid data: {e}", str(path))

    n_nodes = int(np.prod(mesh.shape))
    if data.shape != (n_nodes, mesh.dim + 1):
        raise GridDataError(
            f"expected {n_nodes} rows of {mesh.dim + 1} columns for N={mesh.n_cells}, got {data.shape}", str(path)
        )
    for column, coord in zip(data.T, mesh.coordinates()):
        if np.max(np.abs(column - coord.ravel())) > COORD_TOL:
            raise GridDataError("node coordinates do not match the mesh", str(path))
    values = data[:, -1].reshape(mesh.shape)
    if not np.all(np.isfinite(values)):
        raise GridDataError("grid data holds non-finite values", str(path))
    return GridFunction(mesh, values)
