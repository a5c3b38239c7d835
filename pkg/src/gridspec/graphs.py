"""Toeplitz, d-level Toeplitz and diamond Toeplitz graphs.

All three families reduce to the same block description: a box n of
diamonds, each a copy of a nu x nu mold graph, and a list of lex-positive
offsets k with a nu x nu block B_k.  Block (i, j) of the adjacency matrix is
B_k when i - j = k, B_k^T when j - i = k, the mold when i = j, zero otherwise.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import scipy.io
import scipy.sparse as sp

from .multiindex import (
    DirectionSet,
    MultiIndex,
    box_indices,
    box_positions,
    direction_set,
    grid_size,
    lex_compare,
)


class SpecError(ValueError):
    """Raised for specs that violate the structural invariants."""


@dataclass(frozen=True, eq=False)
class BlockStructure:
    n: tuple[int, ...]
    nu: int
    mold: np.ndarray
    blocks: tuple[tuple[tuple[int, ...], np.ndarray], ...]

    @property
    def d(self) -> int:
        return len(self.n)

    @property
    def dim(self) -> int:
        return self.nu * grid_size(self.n)


def _check_offsets(n: Sequence[int], ts: Sequence[tuple[int, ...]]) -> None:
    if any(b <= 0 for b in n):
        raise SpecError("grid sizes must be positive")
    prev = None
    for t in ts:
        if len(t) != len(n):
            raise SpecError(f"offset {t} has wrong dimension for n={tuple(n)}")
        if any(a < 0 for a in t) or all(a == 0 for a in t):
            raise SpecError(f"offset {t} must be nonnegative and nonzero")
        if any(a >= b for a, b in zip(t, n)):
            raise SpecError(f"offset {t} does not fit in the box n={tuple(n)}")
        if prev is not None and lex_compare(prev, t) >= 0:
            raise SpecError("offsets must be strictly increasing in lexicographic order")
        prev = t


@dataclass(frozen=True)
class ToeplitzGraphSpec:
    """T_n<(t_1, w_1), ..., (t_m, w_m)>."""

    n: int
    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(t), float(w)) for t, w in self.terms))
        self.validate()

    def validate(self) -> None:
        if not self.terms:
            raise SpecError("a Toeplitz graph needs at least one term")
        _check_offsets((self.n,), [(t,) for t, _ in self.terms])
        if any(w == 0 for _, w in self.terms):
            raise SpecError("weights must be nonzero")

    def structure(self) -> BlockStructure:
        blocks = tuple(((t,), np.array([[w]])) for t, w in self.terms)
        return BlockStructure((int(self.n),), 1, np.zeros((1, 1)), blocks)

    def with_n(self, n) -> "ToeplitzGraphSpec":
        n = int(n[0]) if isinstance(n, (list, tuple)) else int(n)
        return ToeplitzGraphSpec(n, self.terms)


@dataclass(frozen=True)
class DLevelTerm:
    t: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(a) for a in self.t))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def directions(self) -> DirectionSet:
        return direction_set(self.t)


@dataclass(frozen=True)
class DLevelGraphSpec:
    """T_n<{[t_1], w_1}, ..., {[t_m], w_m}> with one weight per direction class."""

    n: tuple[int, ...]
    terms: tuple[DLevelTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(a) for a in self.n))
        object.__setattr__(self, "terms", tuple(
            t if isinstance(t, DLevelTerm) else DLevelTerm(*t) for t in self.terms))
        self.validate()

    def validate(self) -> None:
        if not self.terms:
            raise SpecError("a d-level graph needs at least one term")
        _check_offsets(self.n, [term.t for term in self.terms])
        for term in self.terms:
            c = len(term.directions)
            if len(term.weights) != c:
                raise SpecError(f"offset {term.t} has {c} direction classes "
                                f"but {len(term.weights)} weights")
            if any(w == 0 for w in term.weights):
                raise SpecError("weights must be nonzero")

    def structure(self) -> BlockStructure:
        blocks = []
        for term in self.terms:
            for v, w in zip(term.directions.classes, term.weights):
                blocks.append((v.entries, np.array([[w]])))
        return BlockStructure(self.n, 1, np.zeros((1, 1)), tuple(blocks))

    def with_n(self, n) -> "DLevelGraphSpec":
        return DLevelGraphSpec(_broadcast_n(n, len(self.n)), self.terms)


@dataclass(frozen=True, eq=False)
class DiamondTerm:
    t: tuple[int, ...]
    links: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(a) for a in self.t))
        object.__setattr__(self, "links", tuple(np.array(L, dtype=float) for L in self.links))

    @property
    def directions(self) -> DirectionSet:
        return direction_set(self.t)


@dataclass(frozen=True, eq=False)
class DiamondGraphSpec:
    """Diamond Toeplitz graph T^G_{n,nu}<{[t_1], L_1}, ...> with mold adjacency W."""

    n: tuple[int, ...]
    nu: int
    mold: np.ndarray
    terms: tuple[DiamondTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(a) for a in self.n))
        object.__setattr__(self, "nu", int(self.nu))
        object.__setattr__(self, "mold", np.array(self.mold, dtype=float))
        object.__setattr__(self, "terms", tuple(
            t if isinstance(t, DiamondTerm) else DiamondTerm(*t) for t in self.terms))
        self.validate()

    def validate(self) -> None:
        nu = self.nu
        if nu < 1:
            raise SpecError("diamond size must be at least 1")
        W = self.mold
        if W.shape != (nu, nu):
            raise SpecError(f"mold must be {nu}x{nu}")
        if not np.array_equal(W, W.T):
            raise SpecError("mold adjacency must be symmetric")
        if np.any(np.diag(W) != 0):
            raise SpecError("mold adjacency must have zero diagonal")
        _check_offsets(self.n, [term.t for term in self.terms])
        for term in self.terms:
            c = len(term.directions)
            if len(term.links) != c:
                raise SpecError(f"offset {term.t} has {c} direction classes "
                                f"but {len(term.links)} linking operators")
            for L in term.links:
                if L.shape != (nu, nu):
                    raise SpecError(f"linking operators must be {nu}x{nu}")
                if not np.any(L):
                    raise SpecError("linking operators must be nonzero")
        if not self.terms and not np.any(W):
            raise SpecError("graph has no edges")

    def structure(self) -> BlockStructure:
        blocks = []
        for term in self.terms:
            for v, L in zip(term.directions.classes, term.links):
                blocks.append((v.entries, L))
        return BlockStructure(self.n, self.nu, self.mold, tuple(blocks))

    def with_n(self, n) -> "DiamondGraphSpec":
        return DiamondGraphSpec(_broadcast_n(n, len(self.n)), self.nu, self.mold, self.terms)


GraphSpec = Union[ToeplitzGraphSpec, DLevelGraphSpec, DiamondGraphSpec]


def _broadcast_n(n, d: int) -> tuple[int, ...]:
    if isinstance(n, (int, np.integer)):
        return (int(n),) * d
    n = tuple(int(a) for a in n)
    if len(n) == 1 and d > 1:
        return n * d
    if len(n) != d:
        raise SpecError(f"expected {d} grid sizes, got {len(n)}")
    return n


def as_diamond(spec: GraphSpec) -> DiamondGraphSpec:
    """View any spec as a diamond spec (nu = 1 for scalar families)."""
    if isinstance(spec, DiamondGraphSpec):
        return spec
    if isinstance(spec, ToeplitzGraphSpec):
        terms = [DiamondTerm((t,), [[[w]]]) for t, w in spec.terms]
        return DiamondGraphSpec((spec.n,), 1, [[0.0]], terms)
    terms = [DiamondTerm(term.t, [[[w]] for w in term.weights]) for term in spec.terms]
    return DiamondGraphSpec(spec.n, 1, [[0.0]], terms)


def assemble(structure: BlockStructure) -> sp.csr_matrix:
    """Assemble the symmetric adjacency matrix of a block structure.

    Nodes are ordered lexicographically by (diamond index, position in the
    diamond), the latter being the fastest coordinate.
    """
    n, nu = structure.n, structure.nu
    idx = box_indices(n)
    pos = box_positions(idx, n)
    rows, cols, vals = [], [], []

    def emit(bi, bj, B):
        a, b = np.nonzero(B)
        if a.size == 0 or bi.size == 0:
            return
        r = (bi[:, None] * nu + a[None, :]).ravel()
        c = (bj[:, None] * nu + b[None, :]).ravel()
        v = np.broadcast_to(B[a, b], (bi.size, a.size)).ravel()
        rows.extend((r, c))
        cols.extend((c, r))
        vals.extend((v, v))

    # mold: upper triangle only, mirrored by emit
    emit(pos, pos, np.triu(structure.mold, 1))
    nvec = np.asarray(n)
    for k, B in structure.blocks:
        j = idx - np.asarray(k)
        ok = np.all((j >= 1) & (j <= nvec), axis=1)
        emit(pos[ok], box_positions(j[ok], n), B)
    dim = structure.dim
    if rows:
        r, c, v = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    else:
        r = c = np.zeros(0, dtype=np.int64)
        v = np.zeros(0)
    A = sp.coo_matrix((v, (r, c)), shape=(dim, dim)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def build_toeplitz(spec: ToeplitzGraphSpec) -> sp.csr_matrix:
    return assemble(spec.structure())


def build_dlevel(spec: DLevelGraphSpec) -> sp.csr_matrix:
    return assemble(spec.structure())


def build_diamond(spec: DiamondGraphSpec) -> sp.csr_matrix:
    return assemble(spec.structure())


def build(spec: GraphSpec) -> sp.csr_matrix:
    return assemble(spec.structure())


def graph_laplacian(W, kappa=None) -> sp.csr_matrix:
    """Delta = D + K - W with D the degree (row-sum) matrix and K = diag(kappa)."""
    W = sp.csr_matrix(W)
    if W.shape[0] != W.shape[1]:
        raise ValueError("adjacency must be square")
    dim = W.shape[0]
    kappa = np.zeros(dim) if kappa is None else np.asarray(kappa, dtype=float)
    if kappa.shape != (dim,):
        raise ValueError(f"potential has length {kappa.size}, expected {dim}")
    deg = np.asarray(W.sum(axis=1)).ravel()
    L = sp.diags(deg + kappa) - W
    return sp.csr_matrix(L)


def node_edge_counts(spec: GraphSpec) -> tuple[int, int]:
    """Node count nu*D(n) and number of undirected edges (nonzero pairs i < j)."""
    s = spec.structure()
    D = grid_size(s.n)
    edges = int(np.count_nonzero(np.triu(s.mold, 1))) * D
    for k, B in s.blocks:
        edges += int(np.count_nonzero(B)) * grid_size(tuple(b - abs(a) for a, b in zip(k, s.n)))
    return s.dim, edges


# ---------------------------------------------------------------- JSON / IO

def spec_from_dict(obj: dict) -> GraphSpec:
    try:
        kind = obj["kind"]
        n = obj["n"]
        terms = obj["terms"]
    except KeyError as exc:
        raise SpecError(f"missing field {exc}") from None
    if kind == "toeplitz":
        n = n[0] if isinstance(n, list) else n
        out = []
        for term in terms:
            t = term["t"][0] if isinstance(term["t"], list) else term["t"]
            w = term["weights"]
            w = w[0] if isinstance(w, list) else w
            out.append((int(t), float(w)))
        return ToeplitzGraphSpec(int(n), tuple(out))
    if kind == "dlevel":
        return DLevelGraphSpec(tuple(n), tuple(DLevelTerm(tuple(t["t"]), tuple(t["weights"]))
                                               for t in terms))
    if kind == "diamond":
        nu = int(obj.get("nu", 1))
        mold = obj.get("mold", np.zeros((nu, nu)).tolist())
        return DiamondGraphSpec(tuple(n), nu, mold,
                                tuple(DiamondTerm(tuple(t["t"]), tuple(t["links"])) for t in terms))
    raise SpecError(f"unknown graph kind {kind!r}")


def spec_to_dict(spec: GraphSpec) -> dict:
    if isinstance(spec, ToeplitzGraphSpec):
        return {"kind": "toeplitz", "n": [spec.n], "nu": 1,
                "terms": [{"t": [t], "weights": [w]} for t, w in spec.terms]}
    if isinstance(spec, DLevelGraphSpec):
        return {"kind": "dlevel", "n": list(spec.n), "nu": 1,
                "terms": [{"t": list(t.t), "weights": list(t.weights)} for t in spec.terms]}
    return {"kind": "diamond", "n": list(spec.n), "nu": spec.nu, "mold": spec.mold.tolist(),
            "terms": [{"t": list(t.t), "links": [L.tolist() for L in t.links]}
                      for t in spec.terms]}


def load_spec(path) -> GraphSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def save_spec(spec: GraphSpec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")


def export_matrix_market(A, path, comment: str = "") -> None:
    A = sp.coo_matrix(A)
    scipy.io.mmwrite(str(path), A, comment=comment, field="real", symmetry="symmetric")
