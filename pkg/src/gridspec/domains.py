"""Regular domains inside [0,1]^d given by membership predicates.

Membership is strict (open sets): points on the boundary are excluded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True, eq=False)
class DomainPredicate:
    membership: Callable[[np.ndarray], np.ndarray]
    description: str
    params: dict = field(default_factory=dict)

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.asarray(self.membership(X), dtype=bool)

    def to_dict(self) -> dict:
        return dict(self.params)


def cube() -> DomainPredicate:
    def inside(X):
        return np.all((X > 0) & (X < 1), axis=-1)
    return DomainPredicate(inside, "unit cube", {"name": "cube"})


def disk(center=(0.5, 0.5), radius=0.5) -> DomainPredicate:
    c = np.asarray(center, dtype=float)
    r2 = float(radius) ** 2

    def inside(X):
        return np.sum((X - c) ** 2, axis=-1) < r2
    return DomainPredicate(inside, f"disk(center={tuple(c.tolist())}, radius={radius})",
                           {"name": "disk", "center": c.tolist(), "radius": float(radius)})


def halfspace(axis: int, threshold: float) -> DomainPredicate:
    """{x : x_axis < threshold} intersected with the cube."""
    def inside(X):
        return X[:, axis] < threshold
    return DomainPredicate(inside, f"halfspace(x_{axis} < {threshold})",
                           {"name": "halfspace", "axis": int(axis), "threshold": float(threshold)})


def polygon(vertices) -> DomainPredicate:
    """Planar polygon, membership by the even-odd crossing rule."""
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
        raise ValueError("polygon needs at least three 2-D vertices")

    def inside(X):
        x, y = X[:, 0], X[:, 1]
        res = np.zeros(len(X), dtype=bool)
        for (x0, y0), (x1, y1) in zip(V, np.roll(V, -1, axis=0)):
            crosses = (y0 > y) != (y1 > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            res ^= crosses & (x < xint)
        return res
    return DomainPredicate(inside, f"polygon({len(V)} vertices)",
                           {"name": "polygon", "vertices": V.tolist()})


def from_config(cfg: dict | str) -> DomainPredicate:
    """Build a predicate from {"name": ..., params} (or just a name)."""
    if isinstance(cfg, str):
        cfg = {"name": cfg}
    name = cfg.get("name")
    if name == "cube":
        return cube()
    if name == "disk":
        return disk(cfg.get("center", (0.5, 0.5)), cfg.get("radius", 0.5))
    if name == "halfspace":
        return halfspace(cfg["axis"], cfg["threshold"])
    if name == "polygon":
        return polygon(cfg["vertices"])
    raise ValueError(f"unknown domain {name!r}")
