"""Monotone rearrangement of sampled symbols.

The rearrangement g~ is approximated by sorting a uniform sampling of the
symbol's eigenvalue functions and reading the sorted array as a function of
x in (0, 1] at the points i/N.

Grid convention: an axis with m samples uses the interior points
theta_j = j pi / (m + 1), j = 1..m, on [0, pi] (or the analogous interior
points of [-pi, pi]); spatial axes use x_j = j / (m + 1), which coincide with
the node coordinates of a grid immersion with m nodes per axis.  A closed
grid (linspace including both ends) is available for comparison.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .symbol import TrigSymbol, WeightedSymbol


def theta_grid(m: int, half: bool = True, closed: bool = False) -> np.ndarray:
    """m sample points on [0, pi] (half) or [-pi, pi]."""
    if m < 1:
        raise ValueError("need at least one sample point")
    lo = 0.0 if half else -np.pi
    if closed:
        return np.linspace(lo, np.pi, m)
    return lo + (np.pi - lo) * np.arange(1, m + 1) / (m + 1)


def spatial_grid(m: int) -> np.ndarray:
    return np.arange(1, m + 1) / (m + 1)


def _product(axes: Sequence[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([a.ravel() for a in mesh], axis=1)


@dataclass(frozen=True, eq=False)
class SampleCloud:
    values: np.ndarray
    grid_meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.values.size)


POSITIONS = ("right", "endpoints")


@dataclass(frozen=True, eq=False)
class Rearrangement:
    """Sorted samples s_1 <= ... <= s_N read as a function on [0, 1].

    positions="right" places s_i at i/N (the default); "endpoints" places
    it at (i - 1)/(N - 1), so the curve runs from s_1 at 0 to s_N at 1.
    """

    sorted: np.ndarray
    meta: dict = field(default_factory=dict)
    positions: str = "right"

    def __post_init__(self):
        s = np.asarray(self.sorted, dtype=float).ravel()
        if s.size == 0:
            raise ValueError("empty rearrangement")
        if np.any(np.diff(s) < 0):
            raise ValueError("samples are not sorted")
        if self.positions not in POSITIONS:
            raise ValueError(f"positions must be one of {POSITIONS}")
        object.__setattr__(self, "sorted", s)

    @property
    def N(self) -> int:
        return int(self.sorted.size)

    @property
    def grid(self) -> np.ndarray:
        if self.positions == "endpoints" and self.N > 1:
            return np.linspace(0.0, 1.0, self.N)
        return np.arange(1, self.N + 1) / self.N

    def quantile(self, x):
        """Piecewise-linear g~ through (grid_i, s_i), constant outside the grid."""
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > 1)):
            raise ValueError("x must lie in [0, 1]")
        out = np.interp(x, self.grid, self.sorted)
        return float(out) if out.ndim == 0 else out

    __call__ = quantile

    def phi(self, t):
        """#{samples <= t} / N."""
        out = np.searchsorted(self.sorted, np.asarray(t, dtype=float), side="right") / self.N
        return float(out) if np.ndim(out) == 0 else out

    def derivative_at(self, x: float) -> float:
        """Backward difference (g~(x) - g~(x - h)) / h with h = 1/N."""
        h = 1.0 / self.N
        if x - h < -1e-15 or x > 1:
            raise ValueError("need 1/N <= x <= 1")
        return float((self.quantile(x) - self.quantile(max(x - h, 0.0))) / h)

    def to_csv(self, points: int | None = None) -> str:
        buf = io.StringIO()
        buf.write("x,gtilde\n")
        if points is None:
            xs, ys = self.grid, self.sorted
        else:
            xs = np.arange(1, points + 1) / points
            ys = self.quantile(xs)
        for a, b in zip(xs, ys):
            buf.write(f"{a:.17g},{b:.17g}\n")
        return buf.getvalue()


def _counts(counts, d: int) -> list[int]:
    if np.isscalar(counts):
        return [int(counts)] * d
    counts = [int(c) for c in counts]
    if len(counts) == 1:
        return counts * d
    if len(counts) != d:
        raise ValueError(f"expected {d} per-axis counts")
    return counts


def sample_symbol(sym: Union[TrigSymbol, WeightedSymbol], counts, half: bool | None = None,
                  spatial_counts=None, closed: bool = False,
                  chunk: int = 1 << 16) -> SampleCloud:
    """Sample every eigenvalue branch on a uniform theta grid (times a spatial grid).

    For a matrix-valued symbol all ordered eigenvalue branches are sampled
    on the same grid and merged; for a weighted symbol each value is
    multiplied by p at the spatial grid points inside the domain.
    """
    weighted = isinstance(sym, WeightedSymbol)
    freq = sym.frequency if weighted else sym
    cnt = _counts(counts, freq.d)
    if half is None:
        half = freq.reflection_invariant()
    th = _product([theta_grid(m, half=half, closed=closed) for m in cnt])
    branches = np.concatenate([freq.eig(th[i:i + chunk]) for i in range(0, len(th), chunk)])
    meta = {"theta_counts": cnt, "half": bool(half), "closed": bool(closed), "nu": freq.nu}
    vals = branches.ravel()
    if weighted:
        sc = _counts(cnt if spatial_counts is None else spatial_counts, sym.spatial_dim)
        X = _product([spatial_grid(m) for m in sc])
        X = X[sym.domain(X)]
        if X.size == 0:
            raise ValueError("no spatial sample points inside the domain")
        p = np.asarray(sym.spatial(X), dtype=float).reshape(-1)
        vals = (p[:, None] * vals[None, :]).ravel()
        meta.update({"spatial_counts": sc, "spatial_points": int(len(X))})
    return SampleCloud(np.asarray(vals, dtype=float), meta)


def rearrange(cloud: SampleCloud, positions: str = "right") -> Rearrangement:
    return Rearrangement(np.sort(cloud.values, kind="stable"), dict(cloud.grid_meta), positions)


def phi(cloud: SampleCloud, t):
    s = np.sort(cloud.values)
    out = np.searchsorted(s, np.asarray(t, dtype=float), side="right") / s.size
    return float(out) if np.ndim(out) == 0 else out


def quantile(r: Rearrangement, x):
    return r.quantile(x)


def derivative_at(r: Rearrangement, x: float) -> float:
    return r.derivative_at(x)
