"""Multi-index arithmetic, lexicographic ordering and direction sets.

A multi-index is an element of Z^d.  Node boxes {1..n_1} x ... x {1..n_d}
are linearized in lexicographic order (last coordinate fastest), which
fixes the layout of every assembled matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np


@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """Immutable element of Z^d with componentwise arithmetic.

    Comparison operators implement the lexicographic order; use
    :func:`componentwise_le` for the partial order.
    """

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        vals = tuple(int(v) for v in entries)
        if not vals:
            raise ValueError("a multi-index needs at least one entry")
        object.__setattr__(self, "entries", vals)

    @property
    def d(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, r):
        return self.entries[r]

    def _check(self, other: "MultiIndex") -> None:
        if not isinstance(other, MultiIndex):
            raise TypeError("expected a MultiIndex")
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        self._check(other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        self._check(other)
        return MultiIndex(a - b for a, b in zip(self, other))

    def __neg__(self) -> "MultiIndex":
        return MultiIndex(-a for a in self)

    def __abs__(self) -> "MultiIndex":
        return MultiIndex(abs(a) for a in self)

    def hadamard(self, h: Sequence[float]) -> np.ndarray:
        """Componentwise product with a real vector (used by grid immersions)."""
        h = np.asarray(h, dtype=float)
        if h.shape != (self.d,):
            raise ValueError("dimension mismatch in Hadamard product")
        return np.asarray(self.entries, dtype=float) * h

    def nnz(self) -> int:
        return sum(1 for a in self if a != 0)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __lt__(self, other: "MultiIndex") -> bool:
        return lex_compare(self, other) < 0

    def __repr__(self) -> str:
        return f"MultiIndex{self.entries}"


def _as_index(i) -> MultiIndex:
    return i if isinstance(i, MultiIndex) else MultiIndex(i)


def lex_compare(i, j) -> int:
    """Return -1, 0 or 1 as i precedes, equals or follows j lexicographically."""
    i, j = _as_index(i), _as_index(j)
    if i.d != j.d:
        raise ValueError(f"dimension mismatch: {i.d} vs {j.d}")
    for a, b in zip(i, j):
        if a != b:
            return -1 if a < b else 1
    return 0


def componentwise_le(i, j) -> bool:
    i, j = _as_index(i), _as_index(j)
    i._check(j)
    return all(a <= b for a, b in zip(i, j))


def grid_size(n) -> int:
    """D(n): the number of nodes of the box 1 <= k <= n."""
    n = _as_index(n)
    if any(a <= 0 for a in n):
        raise ValueError("grid sizes must be positive")
    return int(np.prod(n.entries, dtype=np.int64))


@dataclass(frozen=True)
class DirectionSet:
    """Direction classes {v, -v} of a nonnegative base offset t.

    Representatives have a positive first nonzero component and are listed
    in increasing lexicographic order; weights and linking operators of a
    spec are indexed by this order.
    """

    base: MultiIndex
    classes: tuple[MultiIndex, ...]

    @property
    def sign_patterns(self) -> int:
        return 2 ** self.base.nnz()

    def __len__(self) -> int:
        return len(self.classes)

    def members(self, alpha: int) -> tuple[MultiIndex, MultiIndex]:
        v = self.classes[alpha]
        return v, -v


def direction_set(t) -> DirectionSet:
    t = _as_index(t)
    if any(a < 0 for a in t):
        raise ValueError("offset must be componentwise nonnegative")
    if t.is_zero():
        raise ValueError("the zero offset has no direction")
    nz = [r for r, a in enumerate(t) if a != 0]
    first, rest = nz[0], nz[1:]
    reps = []
    for signs in itertools.product((-1, 1), repeat=len(rest)):
        v = list(t.entries)
        for r, s in zip(rest, signs):
            v[r] = s * v[r]
        reps.append(MultiIndex(v))
    assert all(v[first] > 0 for v in reps)
    reps.sort()
    return DirectionSet(base=t, classes=tuple(reps))


def linearize(k, n) -> int:
    """0-based lexicographic position of the 1-based index k in the box n."""
    k, n = _as_index(k), _as_index(n)
    k._check(n)
    if not all(1 <= a <= b for a, b in zip(k, n)):
        raise ValueError(f"{k} outside the box {n}")
    pos = 0
    for a, b in zip(k, n):
        pos = pos * b + (a - 1)
    return pos


def delinearize(pos: int, n) -> MultiIndex:
    n = _as_index(n)
    if not 0 <= pos < grid_size(n):
        raise ValueError("position out of range")
    out = []
    for b in reversed(n.entries):
        pos, r = divmod(pos, b)
        out.append(r + 1)
    return MultiIndex(reversed(out))


def box_indices(n) -> np.ndarray:
    """All 1-based indices of the box n as a (D(n), d) array in lexicographic order."""
    n = _as_index(n)
    axes = [np.arange(1, b + 1) for b in n]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def box_positions(idx: np.ndarray, n) -> np.ndarray:
    """Vectorized :func:`linearize` for a (N, d) array of 1-based indices."""
    n = np.asarray(_as_index(n).entries, dtype=np.int64)
    idx = np.asarray(idx, dtype=np.int64)
    return np.ravel_multi_index(tuple((idx - 1).T), tuple(n))
