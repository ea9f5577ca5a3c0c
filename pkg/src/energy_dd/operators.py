"""Finite-difference assembly of ``-d*div(kappa grad .) + c`` on x1-slabs of the mesh.

The operator is assembled edge by edge, ``K = D^T W D + c*diag(omega)``,
where ``D`` is the edge/node incidence matrix and ``W`` holds
``d*kappa_edge/h^2``. On an interior node the row of ``K`` is the usual
second-order central stencil. A subdomain slab gets half weight on its
interface column (half of the x2 edges along it, half of the reaction and
load), so that the interface rows of the left and right slabs add up to the
monolithic row. That half-row residual is the discrete interface flux.

Elimination is direct: banded Cholesky (tridiagonal in 1D, band width N+1
in 2D with x1-major numbering).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from numpy.typing import NDArray
from scipy.sparse.linalg import norm as sparse_norm

from .errors import SolverError
from .mesh import FloatArray, Mesh


def _incidence(n_nodes: int) -> sp.csr_matrix:
    """Edge/node incidence of a path with ``n_nodes`` nodes."""
    return sp.diags([-np.ones(n_nodes - 1), np.ones(n_nodes - 1)], [0, 1], shape=(n_nodes - 1, n_nodes), format="csr")


def _harmonic(a: FloatArray, b: FloatArray) -> FloatArray:
    return 2.0 * a * b / (a + b)


def edge_conductivities(mesh: Mesh, kappa: FloatArray) -> Tuple[FloatArray, ...]:
    """Conductivity on the mesh edges.

    In 1D the edge between nodes ``j`` and ``j+1`` is cell ``j``. In 2D an
    edge is shared by up to two cells and gets their harmonic mean.

    Returns:
        ``(kx,)`` in 1D; ``(kx, ky)`` in 2D with ``kx[i, j]`` on the edge
        ``(i, j)-(i+1, j)`` and ``ky[i, j]`` on ``(i, j)-(i, j+1)``
    """
    if mesh.dim == 1:
        return (np.asarray(kappa, dtype=float),)

    n = mesh.n_cells
    kx = np.empty((n, n + 1))
    kx[:, 1:-1] = _harmonic(kappa[:, :-1], kappa[:, 1:])
    kx[:, 0] = kappa[:, 0]
    kx[:, -1] = kappa[:, -1]

    ky = np.empty((n + 1, n))
    ky[1:-1, :] = _harmonic(kappa[:-1, :], kappa[1:, :])
    ky[0, :] = kappa[0, :]
    ky[-1, :] = kappa[-1, :]
    return (kx, ky)


@dataclass(frozen=True)
class RegionOperator:
    """Operator assembled on the closed slab of x1 node indices ``lo..hi``.

    Attributes:
        matrix: ``K`` over all slab nodes, flattened row-major (x1 outer)
        node_weight: Load/reaction weight per node: 1, or 1/2 on a half column
        shape: Nodal shape of the slab
        lo: First x1 node index
        hi: Last x1 node index
        h: Mesh width
    """

    matrix: sp.csr_matrix
    node_weight: FloatArray
    shape: Tuple[int, ...]
    lo: int
    hi: int
    h: float

    def apply(self, values: FloatArray) -> FloatArray:
        """``K @ values`` on slab-shaped arrays."""
        return np.asarray(self.matrix @ values.ravel()).reshape(self.shape)

    def residual(self, values: FloatArray, load: Optional[FloatArray]) -> FloatArray:
        """``K e - omega*f`` on slab-shaped arrays; ``load=None`` means ``f = 0``."""
        res = self.apply(values)
        if load is not None:
            res -= self.node_weight.reshape(self.shape) * load
        return res


def assemble_region(
    mesh: Mesh,
    kappa: FloatArray,
    lo: int,
    hi: int,
    diffusion: float,
    reaction: float,
    half_column: Optional[int] = None,
) -> RegionOperator:
    """Assemble ``-diffusion*div(kappa grad .) + reaction`` on the slab ``lo..hi``.

    Args:
        mesh: Global mesh
        kappa: Per-cell conductivity
        lo: First x1 node index of the slab
        hi: Last x1 node index of the slab
        diffusion: Factor in front of the diffusion term
        reaction: Zeroth-order coefficient
        half_column: Global x1 index of the interface column that gets half weight
    """
    h = mesh.h
    nx = hi - lo + 1
    conductivities = edge_conductivities(mesh, kappa)
    scale = diffusion / h**2

    if mesh.dim == 1:
        shape: Tuple[int, ...] = (nx,)
        incidence = _incidence(nx)
        weights = scale * conductivities[0][lo:hi]
        node_weight = np.ones(nx)
        if half_column is not None:
            node_weight[half_column - lo] = 0.5
        stiffness = incidence.T @ sp.diags(weights) @ incidence
    else:
        ny = mesh.n_cells + 1
        shape = (nx, ny)
        kx, ky = conductivities
        dx = sp.kron(_incidence(nx), sp.identity(ny), format="csr")
        dy = sp.kron(sp.identity(nx), _incidence(ny), format="csr")
        wx = scale * kx[lo:hi, :]
        wy = scale * ky[lo : hi + 1, :].copy()
        node_weight = np.ones(shape)
        if half_column is not None:
            wy[half_column - lo, :] *= 0.5
            node_weight[half_column - lo, :] = 0.5
        stiffness = dx.T @ sp.diags(wx.ravel()) @ dx + dy.T @ sp.diags(wy.ravel()) @ dy

    node_weight = node_weight.ravel()
    matrix = sp.csr_matrix(stiffness + sp.diags(reaction * node_weight))
    return RegionOperator(matrix=matrix, node_weight=node_weight, shape=shape, lo=lo, hi=hi, h=h)


class BandedSPDSolver:
    """Banded Cholesky factorization of a sparse SPD matrix, factored once and reused."""

    def __init__(self, matrix: sp.spmatrix):
        coo = sp.coo_matrix(matrix)
        n = coo.shape[0]
        bandwidth = int(np.max(np.abs(coo.row - coo.col))) if coo.nnz else 0
        csr = coo.tocsr()
        # upper form: ab[bandwidth + i - j, j] = a[i, j] for i <= j
        ab = np.zeros((bandwidth + 1, n))
        for k in range(bandwidth + 1):
            ab[bandwidth - k, k:] = csr.diagonal(k)
        try:
            self._factor = scipy.linalg.cholesky_banded(ab, lower=False)
        except np.linalg.LinAlgError as e:
            raise SolverError(f"operator is not positive definite: {e}")
        self.bandwidth = bandwidth
        self.size = n

    def solve(self, rhs: FloatArray) -> FloatArray:
        """Solve ``A x = rhs``."""
        return np.asarray(scipy.linalg.cho_solve_banded((self._factor, False), rhs))


class DirichletSystem:
    """A region operator with some nodes prescribed and the rest eliminated directly.

    Args:
        operator: The assembled slab operator
        fixed: Boolean mask (slab shape) of prescribed nodes
    """

    def __init__(self, operator: RegionOperator, fixed: NDArray[np.bool_]):
        self.operator = operator
        self.fixed = np.asarray(fixed, dtype=bool).ravel()
        free = ~self.fixed
        matrix = operator.matrix
        self.free_matrix = matrix[free][:, free]
        self.coupling = matrix[free][:, self.fixed]
        self._solver = BandedSPDSolver(self.free_matrix)

    def solve(self, load: Optional[FloatArray], prescribed: Optional[FloatArray] = None) -> FloatArray:
        """Solve ``K e = load`` on the free nodes.

        Args:
            load: Right-hand side for every slab node (only free entries are used); zero if omitted
            prescribed: Slab-shaped array whose fixed entries are the prescribed values; zero if omitted

        Returns:
            Slab-shaped solution including the prescribed values
        """
        values = np.zeros(self.fixed.size)
        free = ~self.fixed
        rhs = np.zeros(int(free.sum())) if load is None else np.asarray(load, dtype=float).ravel()[free]
        if prescribed is not None:
            values[self.fixed] = np.asarray(prescribed, dtype=float).ravel()[self.fixed]
            rhs = rhs - self.coupling @ values[self.fixed]
        values[free] = self._solver.solve(rhs)
        return values.reshape(self.operator.shape)


def relative_residual(
    operator: RegionOperator, values: FloatArray, load: Optional[FloatArray], free: NDArray[np.bool_]
) -> float:
    """Relative residual ``|K e - omega f| / (|K| |e| + |omega f|)`` over the free nodes."""
    free = np.asarray(free, dtype=bool).reshape(operator.shape)
    res = operator.residual(values, load)[free]
    scale = sparse_norm(operator.matrix, np.inf) * np.max(np.abs(values))
    if load is not None:
        scale += np.max(np.abs(operator.node_weight.reshape(operator.shape) * load))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(res)) / scale)
