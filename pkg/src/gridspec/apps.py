"""Discretization matrices read as weighted graph Laplacians.

* FD: 5-point scheme for -div(p grad u) + q u on the disk B_{1/2} with
  Dirichlet conditions, built as a sub-graph of the full-cube grid graph.
* FEM: quadratic C0 B-spline stiffness, a 1-level diamond graph with nu = 2.
* IgA: cubic C2 B-spline stiffness, Toeplitz up to local boundary rows.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import domains
from .graphs import DiamondGraphSpec, DLevelGraphSpec, ToeplitzGraphSpec, build, graph_laplacian
from .immersion import (
    GridGraph,
    boundary_potential,
    immerse_closed_cube,
    restrict_domain,
    with_potential,
)
from .rearrangement import Rearrangement, rearrange, sample_symbol
from .spectral import (
    Spectrum,
    extreme_gap,
    outlier_count,
    sym_eigs,
    weyl_errors,
)
from .symbol import (
    TrigSymbol,
    WeightedSymbol,
    image_intervals,
    laplacian_symbol,
    symbol_of,
)

# ------------------------------------------------------------------- FD


def fd_diffusion(X: np.ndarray) -> np.ndarray:
    return 1.0 + (X[:, 0] - 0.5) ** 2 + (X[:, 1] - 0.5) ** 2


def fd_potential(X: np.ndarray) -> np.ndarray:
    return np.exp(X[:, 0] * X[:, 1])


@dataclass(frozen=True, eq=False)
class FDDiskProblem:
    n: int
    p: Callable[[np.ndarray], np.ndarray] = fd_diffusion
    q: Callable[[np.ndarray], np.ndarray] = fd_potential
    p_extension: float = 1.25
    center: tuple = (0.5, 0.5)
    radius: float = 0.5

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("FD problem needs n >= 4")

    @property
    def domain(self) -> domains.DomainPredicate:
        return domains.disk(self.center, self.radius)

    def extended_p(self, X: np.ndarray) -> np.ndarray:
        inside = self.domain(X)
        return np.where(inside, self.p(X), self.p_extension)


@dataclass(frozen=True, eq=False)
class FDResult:
    delta: sp.csr_matrix
    graph: GridGraph
    mother: GridGraph
    kappa_classes: dict
    predicted: WeightedSymbol

    @property
    def dim(self) -> int:
        return self.delta.shape[0]


def five_point_spec(n: int) -> DLevelGraphSpec:
    return DLevelGraphSpec((n, n), [((0, 1), (1.0,)), ((1, 0), (1.0,))])


def fd_disk_laplacian(prob: FDDiskProblem) -> FDResult:
    """Graph Laplacian D + K - W of the FD graph on the disk, and its symbol."""
    spec = five_point_spec(prob.n)
    h = 1.0 / (prob.n + 1)
    # the disk is convex, so every kept edge has its midpoint inside and
    # the sub-graph weights agree with the mother graph's
    mother = immerse_closed_cube(spec, prob.extended_p)
    g = restrict_domain(mother, prob.domain)
    kappa = boundary_potential(g, mother, prob.q, h2_scale=h * h)
    g = with_potential(g, kappa.values)
    delta = graph_laplacian(g.adjacency, g.potential)
    f = symbol_of(spec)
    predicted = laplacian_symbol(f, 4.0, prob.p, prob.domain, spatial_dim=2)
    return FDResult(delta, g, mother, kappa.classes, predicted)


# ------------------------------------------------------------------ FEM

FEM_DIAG = np.array([[4.0, -2.0], [-2.0, 8.0]])


@dataclass(frozen=True, eq=False)
class StiffnessMatrix:
    matrix: sp.csr_matrix
    normalization: float
    label: str = ""


@dataclass(frozen=True, eq=False)
class FEMResult:
    A: StiffnessMatrix
    K: np.ndarray
    spec: DiamondGraphSpec
    predicted: TrigSymbol


def fem_stencil_matrix(n: int) -> np.ndarray:
    """The bracketed 2n x 2n integer matrix M with A_n = (n/3) M."""
    M = np.zeros((2 * n, 2 * n))
    for i in range(n):
        M[2 * i:2 * i + 2, 2 * i:2 * i + 2] = FEM_DIAG
        if i + 1 < n:
            M[2 * i + 1, 2 * i + 2:2 * i + 4] = -2.0
            M[2 * i + 2:2 * i + 4, 2 * i + 1] = -2.0
    return M


def fem_diamond_spec(n: int) -> DiamondGraphSpec:
    """Mold (1/3)[[0,2],[2,0]]; the link couples the second node of diamond i
    to both nodes of diamond i+1, i.e. block (i+1, i) = (1/3)[[0,2],[0,2]]."""
    mold = np.array([[0.0, 2.0], [2.0, 0.0]]) / 3.0
    L = np.array([[0.0, 2.0], [0.0, 2.0]]) / 3.0
    return DiamondGraphSpec((n,), 2, mold, [((1,), [L])])


def fem_potential(n: int) -> np.ndarray:
    """Diagonal of K_n: 4/3 on the first node of each diamond, 8/3 on the second."""
    return np.tile([4.0 / 3.0, 8.0 / 3.0], n)


def fem_quadratic_stiffness(n: int) -> FEMResult:
    if n < 3:
        raise ValueError("FEM stiffness needs n >= 3")
    A = sp.csr_matrix((n / 3.0) * fem_stencil_matrix(n))
    spec = fem_diamond_spec(n)
    K = fem_potential(n)
    # symbol of K - W: diag(K) on C_0, -C_k elsewhere
    f = symbol_of(spec)
    coeffs = {tuple(k): -C for k, C in zip(f.offsets, f.coeffs)}
    coeffs[(0,)] = coeffs.get((0,), 0) + np.diag(K[:2])
    predicted = TrigSymbol.from_dict(1, 2, coeffs)
    return FEMResult(StiffnessMatrix(A, n / 3.0, "fem-q2"), K, spec, predicted)


def fem_decomposition_residual(n: int) -> float:
    """max |(1/n) A_n - (K_n - W)| over all entries."""
    res = fem_quadratic_stiffness(n)
    lhs = res.A.matrix.toarray() / n
    rhs = np.diag(res.K) - build(res.spec).toarray()
    return float(np.max(np.abs(lhs - rhs)))


# ------------------------------------------------------------------ IgA

IGA_STENCIL = np.array([160.0, -30.0, -48.0, -2.0])  # offsets 0..3
IGA_TOP = [
    [360.0, 9.0, -60.0, -3.0],
    [9.0, 162.0, -8.0, -47.0, -2.0],
    [-60.0, -8.0, 160.0, -30.0, -48.0, -2.0],
    [-3.0, -47.0, -30.0, 160.0, -30.0, -48.0, -2.0],
]


def iga_graph_spec(n: int) -> ToeplitzGraphSpec:
    return ToeplitzGraphSpec(n, [(1, 30 / 240), (2, 48 / 240), (3, 2 / 240)])


def iga_symbol() -> TrigSymbol:
    c = IGA_STENCIL / 240.0
    return TrigSymbol.from_dict(1, 1, {(k,): c[abs(k)] for k in range(-3, 4)})


def iga_cubic_stiffness(n: int) -> tuple[StiffnessMatrix, TrigSymbol]:
    if n < 9:
        raise ValueError("IgA stiffness needs n >= 9 to hold both boundary bands")
    M = np.zeros((n, n))
    for k, c in enumerate(IGA_STENCIL):
        idx = np.arange(n - k)
        M[idx, idx + k] = c
        M[idx + k, idx] = c
    for i, row in enumerate(IGA_TOP):
        M[i, :] = 0.0
        M[i, :len(row)] = row
        M[n - 1 - i, :] = 0.0
        M[n - 1 - i, n - len(row):] = row[::-1]
    # the top/bottom rows fix the matching columns by symmetry
    for i, row in enumerate(IGA_TOP):
        M[:len(row), i] = row
        M[n - len(row):, n - 1 - i] = row[::-1]
    return StiffnessMatrix(sp.csr_matrix(M / 240.0), 1.0 / 240.0, "iga-c3"), iga_symbol()


# ----------------------------------------------------------- validation

@dataclass(frozen=True, eq=False)
class ApplicationReport:
    label: str
    dim: int
    spectrum: Spectrum
    rearrangement: Rearrangement
    errors: list
    gap: float
    outliers: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"label": self.label, "dim": self.dim,
                "weyl_errors": [e.to_json() for e in self.errors],
                "extreme_gap": self.gap, "outliers": self.outliers,
                "lambda_min": float(self.spectrum.eigenvalues[0]),
                "lambda_max": float(self.spectrum.eigenvalues[-1]),
                "meta": self.meta}

    def errors_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,x,k,lambda,gtilde,rel_error\n")
        for e in self.errors:
            buf.write(f"{e.n},{e.x:.6g},{e.k},{e.lam:.17g},{e.gtilde:.17g},{e.rel_error:.17g}\n")
        return buf.getvalue()


def validate_application(matrix, predicted, quantiles: Sequence[float] = (0.1, 0.5, 0.8, 1.0),
                         counts=None, label: str = "", n=None,
                         outlier_margin: float | None = 1e-8) -> ApplicationReport:
    """sym_eigs -> sample_symbol -> rearrange -> weyl_errors / extreme_gap / outliers."""
    if isinstance(matrix, StiffnessMatrix):
        matrix = matrix.matrix
    s = sym_eigs(matrix)
    if counts is None:
        freq = predicted.frequency if isinstance(predicted, WeightedSymbol) else predicted
        counts = max(2, int(round((s.dim / freq.nu) ** (1.0 / freq.d))))
    r = rearrange(sample_symbol(predicted, counts))
    errs = weyl_errors(s, r, quantiles, n=n)
    outl = None
    if outlier_margin is not None and isinstance(predicted, TrigSymbol):
        outl = outlier_count(s, image_intervals(predicted), outlier_margin)
    return ApplicationReport(label, s.dim, s, r, errs, extreme_gap(s), outl,
                             {"counts": counts, "samples": r.N})
