"""Uniform meshes, two-subdomain decompositions and grid functions.

Node ``(i, j)`` of the 2D mesh sits at ``(i*h, j*h)``; arrays are indexed
``[i, j]`` with ``i`` along x1 (the direction split by the interface) and
``j`` along x2. The interface is always a grid node (1D) or a grid column
(2D), identified by its node index ``m``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple, Union

import numpy as np
from numpy.typing import NDArray

from .errors import DecompositionError, MeshError, MeshMismatchError

FloatArray = NDArray[np.float64]

# Interface values of a decomposition: length 1 in 1D, N-1 interior column values in 2D.
Trace = FloatArray

# |alpha - m/N| allowed when an interface is given as a real position
ALIGNMENT_TOL = 1e-12


class Side(str, Enum):
    """Subdomain side relative to the interface."""

    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Side":
        """The opposite side."""
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class Mesh1D:
    """Uniform grid of the unit interval with nodes ``x_j = j*h``, ``j = 0..N``."""

    n_cells: int
    dim: int = field(default=1, init=False)

    def __post_init__(self) -> None:
        if isinstance(self.n_cells, bool) or not isinstance(self.n_cells, (int, np.integer)):
            raise MeshError(f"n_cells must be an integer, got {self.n_cells!r}", None)
        if self.n_cells < 4:
            raise MeshError(f"n_cells must be at least 4, got {self.n_cells}", int(self.n_cells))

    @property
    def h(self) -> float:
        """Cell width."""
        return 1.0 / self.n_cells

    @property
    def shape(self) -> Tuple[int, ...]:
        """Shape of a nodal array."""
        return (self.n_cells + 1,)

    @property
    def cell_shape(self) -> Tuple[int, ...]:
        """Shape of a per-cell array."""
        return (self.n_cells,)

    @property
    def nodes(self) -> FloatArray:
        """Node coordinates."""
        return np.arange(self.n_cells + 1, dtype=float) * self.h

    def coordinates(self) -> Tuple[FloatArray, ...]:
        """Nodal coordinate arrays, one per dimension."""
        return (self.nodes,)

    def boundary_mask(self) -> NDArray[np.bool_]:
        """True on Dirichlet boundary nodes."""
        mask = np.zeros(self.shape, dtype=bool)
        mask[[0, -1]] = True
        return mask


@dataclass(frozen=True)
class Mesh2D:
    """Uniform ``N x N`` grid of the unit square, Dirichlet on all four sides."""

    n_cells: int
    dim: int = field(default=2, init=False)

    def __post_init__(self) -> None:
        if isinstance(self.n_cells, bool) or not isinstance(self.n_cells, (int, np.integer)):
            raise MeshError(f"n_cells must be an integer, got {self.n_cells!r}", None)
        if self.n_cells < 4:
            raise MeshError(f"n_cells must be at least 4, got {self.n_cells}", int(self.n_cells))

    @property
    def h(self) -> float:
        """Cell width in both directions."""
        return 1.0 / self.n_cells

    @property
    def shape(self) -> Tuple[int, ...]:
        """Shape of a nodal array."""
        return (self.n_cells + 1, self.n_cells + 1)

    @property
    def cell_shape(self) -> Tuple[int, ...]:
        """Shape of a per-cell array."""
        return (self.n_cells, self.n_cells)

    @property
    def nodes(self) -> FloatArray:
        """Node coordinates along either axis."""
        return np.arange(self.n_cells + 1, dtype=float) * self.h

    def coordinates(self) -> Tuple[FloatArray, ...]:
        """Nodal coordinate arrays ``(x1, x2)``, indexed ``[i, j]``."""
        x1, x2 = np.meshgrid(self.nodes, self.nodes, indexing="ij")
        return (x1, x2)

    def boundary_mask(self) -> NDArray[np.bool_]:
        """True on Dirichlet boundary nodes."""
        mask = np.zeros(self.shape, dtype=bool)
        mask[[0, -1], :] = True
        mask[:, [0, -1]] = True
        return mask


Mesh = Union[Mesh1D, Mesh2D]


def make_mesh(n_cells: int, dim: int) -> Mesh:
    """Build a 1D or 2D uniform mesh.

    Raises:
        MeshError: If ``dim`` is not 1 or 2 or ``n_cells`` is too small
    """
    if dim == 1:
        return Mesh1D(n_cells)
    if dim == 2:
        return Mesh2D(n_cells)
    raise MeshError(f"dim must be 1 or 2, got {dim}", n_cells)


@dataclass(frozen=True)
class Decomposition:
    """Two non-overlapping subdomains ``(0, alpha)`` and ``(alpha, 1)`` (times ``[0, 1]`` in 2D).

    Attributes:
        mesh: The global mesh
        m: Interface node index, ``alpha = m*h``
    """

    mesh: Mesh
    m: int

    def __post_init__(self) -> None:
        n = self.mesh.n_cells
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise DecompositionError(f"interface index must be an integer, got {self.m!r}")
        if not 0 < self.m < n:
            raise DecompositionError(f"interface index m={self.m} must satisfy 0 < m < N={n}", m=int(self.m))
        if not 2 <= self.m <= n - 2:
            raise DecompositionError(
                f"both subdomains need at least 2 cells: m={self.m} must lie in [2, {n - 2}]", m=int(self.m)
            )

    @classmethod
    def from_alpha(cls, mesh: Mesh, alpha: float) -> "Decomposition":
        """Build a decomposition from a real interface position.

        Raises:
            DecompositionError: If ``alpha`` is not finite or not a grid node ``m/N``
        """
        if not np.isfinite(alpha):
            raise DecompositionError(f"alpha={alpha!r} must be a finite interface position", alpha=alpha)
        m = int(round(alpha * mesh.n_cells))
        if abs(alpha - m / mesh.n_cells) > ALIGNMENT_TOL:
            raise DecompositionError(
                f"alpha={alpha!r} is not grid-aligned (requires alpha = m/N with N={mesh.n_cells})",
                alpha=alpha,
            )
        return cls(mesh, m)

    @property
    def alpha(self) -> float:
        """Interface position."""
        return self.m * self.mesh.h

    @property
    def trace_size(self) -> int:
        """Number of interface unknowns."""
        return 1 if self.mesh.dim == 1 else self.mesh.n_cells - 1

    def node_range(self, side: Side) -> Tuple[int, int]:
        """First and last x1 node index (inclusive) of the closed subdomain."""
        if side is Side.LEFT:
            return 0, self.m
        return self.m, self.mesh.n_cells

    def restrict(self, values: FloatArray, side: Side) -> FloatArray:
        """Restrict a global nodal array to the closed subdomain ``side``."""
        lo, hi = self.node_range(side)
        return np.array(values[lo : hi + 1], dtype=float)

    def interface_values(self, values: FloatArray) -> Trace:
        """Extract the trace (interface unknowns) of a global nodal array."""
        if self.mesh.dim == 1:
            return np.array([values[self.m]], dtype=float)
        return np.array(values[self.m, 1:-1], dtype=float)

    def as_trace(self, value: Union[float, FloatArray]) -> Trace:
        """Broadcast a scalar or validate an array as a trace of this decomposition.

        Raises:
            MeshMismatchError: If an array of the wrong length is given
        """
        arr = np.atleast_1d(np.asarray(value, dtype=float))
        if arr.size == 1 and self.trace_size > 1:
            arr = np.full(self.trace_size, float(arr[0]))
        if arr.shape != (self.trace_size,):
            raise MeshMismatchError(f"trace must have {self.trace_size} values, got shape {arr.shape}")
        return arr


@dataclass(frozen=True)
class GridFunction:
    """Nodal values on a mesh, zero on the Dirichlet boundary where the field is a solution.

    Attributes:
        mesh: The mesh the values live on
        values: Array of shape ``mesh.shape``
        diverged: Set on iterates of a diverged run, which may hold non-finite values
    """

    mesh: Mesh
    values: FloatArray
    diverged: bool = False

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.mesh.shape:
            raise MeshMismatchError(f"values of shape {values.shape} do not match mesh shape {self.mesh.shape}")
        if not self.diverged and not np.all(np.isfinite(values)):
            raise MeshMismatchError("grid function holds non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, mesh: Mesh) -> "GridFunction":
        """The zero grid function."""
        return cls(mesh, np.zeros(mesh.shape))

    def check_same_mesh(self, other: "GridFunction") -> None:
        """Raise MeshMismatchError unless ``other`` lives on the same mesh."""
        if other.mesh != self.mesh:
            raise MeshMismatchError(f"mesh mismatch: {self.mesh} vs {other.mesh}")

    def max_abs(self) -> float:
        """Sup norm."""
        return float(np.max(np.abs(self.values)))
