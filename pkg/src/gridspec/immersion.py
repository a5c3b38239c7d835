"""Grid immersions of graphs in [0,1]^d and restriction to subdomains.

A node with 1-based index j is placed at j o h with h_r = 1/(n_r + 1); an
edge (x_i, x_j) of structural weight w gets weight p((x_i + x_j)/2) w.
Restricting to a domain keeps the nodes inside it (principal submatrix);
edges that leave the domain are recorded through a boundary potential
computed against a mother graph on the whole cube.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .domains import DomainPredicate
from .graphs import (
    DiamondGraphSpec,
    DLevelGraphSpec,
    GraphSpec,
    ToeplitzGraphSpec,
    assemble,
)
from .multiindex import box_indices

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class GridGraph:
    coords: np.ndarray                # (N, d)
    adjacency: sp.csr_matrix
    potential: np.ndarray
    h: np.ndarray
    spec: Optional[GraphSpec] = None
    index: Optional[np.ndarray] = None     # (N, d) 1-based diamond index
    position: Optional[np.ndarray] = None  # (N,) 1-based position inside the diamond
    kept: Optional[np.ndarray] = None      # indices into the parent graph
    parent_size: Optional[int] = None
    domain: Optional[DomainPredicate] = None

    @property
    def size(self) -> int:
        return int(self.coords.shape[0])

    @property
    def d(self) -> int:
        return int(self.coords.shape[1])


def _as_field(p) -> Field:
    if p is None:
        return lambda X: np.ones(len(X))
    if np.isscalar(p):
        c = float(p)
        return lambda X: np.full(len(X), c)
    return p


def _weight_by_midpoint(W: sp.csr_matrix, coords: np.ndarray, p: Field) -> sp.csr_matrix:
    C = W.tocoo()
    mid = 0.5 * (coords[C.row] + coords[C.col])
    vals = C.data * np.asarray(p(mid), dtype=float).reshape(-1)
    out = sp.coo_matrix((vals, (C.row, C.col)), shape=W.shape).tocsr()
    out.sort_indices()
    return out


def immerse_cube(spec: GraphSpec, p=None) -> GridGraph:
    """d-level (or Toeplitz) grid graph in [0,1]^d with weights p(midpoint) w."""
    if isinstance(spec, DiamondGraphSpec):
        return immerse_diamond_cube(spec, p)
    if not isinstance(spec, (ToeplitzGraphSpec, DLevelGraphSpec)):
        raise TypeError("expected a Toeplitz or d-level spec")
    s = spec.structure()
    h = 1.0 / (np.asarray(s.n, dtype=float) + 1.0)
    idx = box_indices(s.n)
    coords = idx * h
    W = _weight_by_midpoint(assemble(s), coords, _as_field(p))
    return GridGraph(coords, W, np.zeros(len(coords)), h, spec, idx, np.ones(len(idx), int))


def immerse_closed_cube(spec, p=None) -> GridGraph:
    """Grid graph on the closed cube: the n_r interior nodes per axis plus the
    two boundary layers x_r = 0 and x_r = 1, with the same h = 1/(n + 1).

    Used as the mother graph for Dirichlet problems, where every edge to a
    boundary node (or to a node outside the domain) feeds the potential.
    """
    if not isinstance(spec, (ToeplitzGraphSpec, DLevelGraphSpec)):
        raise TypeError("expected a Toeplitz or d-level spec")
    s = spec.structure()
    n = np.asarray(s.n)
    h = 1.0 / (n + 1.0)
    big = spec.with_n(tuple(int(a) for a in n + 2)).structure()
    idx = box_indices(big.n)
    coords = (idx - 1) * h
    W = _weight_by_midpoint(assemble(big), coords, _as_field(p))
    return GridGraph(coords, W, np.zeros(len(coords)), h, spec, idx - 1, np.ones(len(idx), int))


def immerse_diamond_cube(spec: DiamondGraphSpec, p=None, layout: str = "lined") -> GridGraph:
    """Diamond grid graph: the nu nodes of each diamond lie along the first axis.

    h = (1/(nu n_1 + 1), 1/(n_2 + 1), ...).  With layout="lined" node (j, r)
    sits at ((j_1 - 1) nu + r) h_1, so the nu n_1 positions are distinct; with
    layout="literal" it sits at (j_1 + r - 1) h_1, which lets neighbouring
    diamonds overlap when nu > 1.
    """
    s = spec.structure()
    nu = s.nu
    nvec = np.asarray(s.n, dtype=float)
    h = 1.0 / (nvec + 1.0)
    h[0] = 1.0 / (nu * nvec[0] + 1.0)
    idx = np.repeat(box_indices(s.n), nu, axis=0)
    r = np.tile(np.arange(1, nu + 1), len(idx) // nu)
    first = idx[:, 0].astype(float)
    if layout == "lined":
        first = (first - 1) * nu + r
    elif layout == "literal":
        first = first + r - 1
    else:
        raise ValueError(f"unknown layout {layout!r}")
    coords = idx.astype(float)
    coords[:, 0] = first
    coords = coords * h
    W = _weight_by_midpoint(assemble(s), coords, _as_field(p))
    return GridGraph(coords, W, np.zeros(len(coords)), h, spec, idx, r)


def restrict_domain(g: GridGraph, omega: DomainPredicate) -> GridGraph:
    """Principal sub-graph on the nodes inside omega and strictly inside the cube."""
    inner = np.all((g.coords > 0) & (g.coords < 1), axis=1)
    keep = np.flatnonzero(omega(g.coords) & inner)
    if keep.size == 0:
        raise ValueError(f"no nodes inside {omega.description}")
    A = g.adjacency[keep][:, keep].tocsr()
    A.sort_indices()
    return GridGraph(
        g.coords[keep], A, g.potential[keep], g.h, g.spec,
        None if g.index is None else g.index[keep],
        None if g.position is None else g.position[keep],
        keep if g.kept is None else g.kept[keep],
        g.size if g.parent_size is None else g.parent_size,
        omega,
    )


@dataclass(frozen=True, eq=False)
class BoundaryPotential:
    values: np.ndarray
    deficiency: np.ndarray            # number of mother edges into removed nodes
    classes: dict = field(default_factory=dict)


def boundary_potential(g: GridGraph, mother: GridGraph, q=None, h2_scale: float = 1.0
                       ) -> BoundaryPotential:
    """kappa(v) = h2_scale q(x_v) + sum of mother weights of edges from v to removed nodes."""
    if g.kept is None or g.parent_size != mother.size:
        raise ValueError("graph is not a restriction of the given mother graph")
    if not np.allclose(mother.coords[g.kept], g.coords, rtol=0, atol=1e-14):
        raise ValueError("node coordinates do not match the mother graph")
    removed = np.ones(mother.size, dtype=bool)
    removed[g.kept] = False
    M = mother.adjacency[g.kept][:, np.flatnonzero(removed)].tocsr()
    lost = np.asarray(M.sum(axis=1)).ravel()
    deficiency = np.diff(M.indptr)
    qv = np.zeros(g.size) if q is None else np.asarray(_as_field(q)(g.coords), dtype=float)
    values = h2_scale * qv + lost
    classes = {f"kappa{c}": int(np.sum(deficiency == c)) for c in range(int(deficiency.max(initial=0)) + 1)}
    return BoundaryPotential(values, deficiency, classes)


def with_potential(g: GridGraph, kappa) -> GridGraph:
    kappa = np.asarray(kappa, dtype=float)
    if kappa.shape != (g.size,):
        raise ValueError("potential length does not match the node count")
    return GridGraph(g.coords, g.adjacency, kappa, g.h, g.spec, g.index, g.position,
                     g.kept, g.parent_size, g.domain)
