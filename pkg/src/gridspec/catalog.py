"""Ready-made graph specs for the worked examples and figures."""
from __future__ import annotations

import numpy as np

from .graphs import DiamondGraphSpec, DLevelGraphSpec, ToeplitzGraphSpec

EXAMPLE1_WEIGHTS = (1.0, -6.0, 1.0, 1.0)


def example1(n: int = 1000) -> ToeplitzGraphSpec:
    """T_n<(1,1),(2,-6),(3,1),(4,1)>, symbol 2cos t - 12cos 2t + 2cos 3t + 2cos 4t."""
    return ToeplitzGraphSpec(n, [(k + 1, w) for k, w in enumerate(EXAMPLE1_WEIGHTS)])


def example2(n: int = 60) -> DLevelGraphSpec:
    """2-level graph with w_{1,0}=1, w_{0,1}=2, w_{1,+-1}=-3, w_{2,+-2}=1.

    Symbol 2cos t1 + 4cos t2 - 6cos(t1-t2) - 6cos(t1+t2) + 2cos(2t1-2t2) + 2cos(2t1+2t2).
    """
    return DLevelGraphSpec((n, n), [((0, 1), (2.0,)), ((1, 0), (1.0,)),
                                    ((1, 1), (-3.0, -3.0)), ((2, 2), (1.0, 1.0))])


EXAMPLE3_MOLD = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]], dtype=float)


def example3_links() -> tuple[np.ndarray, np.ndarray]:
    L1 = np.zeros((4, 4))
    L1[0, 0] = -2.0
    L2 = np.zeros((4, 4))
    L2[2, 2] = 0.5
    L2[3, 2] = 6.0
    return L1, L2


def example3(n: int = 250) -> DiamondGraphSpec:
    """Diamond graph with mold C_4 (a 4-cycle), links L_1 at offset 1 and L_2 at offset 2."""
    L1, L2 = example3_links()
    return DiamondGraphSpec((n,), 4, EXAMPLE3_MOLD, [((1,), [L1]), ((2,), [L2])])


def figure_toeplitz(w1: float = 1.0, w3: float = 1.0, n: int = 5) -> ToeplitzGraphSpec:
    """T_5<(1,w1),(3,w3)>."""
    return ToeplitzGraphSpec(n, [(1, w1), (3, w3)])


def figure_two_level(w_minus: float = 1.0, w_plus: float = 2.0, w20: float = 3.0,
                     n=(4, 3)) -> DLevelGraphSpec:
    """n=(4,3) graph with classes [(1,1)] (weights for (1,-1), (1,1)) and [(2,0)]."""
    return DLevelGraphSpec(n, [((1, 1), (w_minus, w_plus)), ((2, 0), (w20,))])


def figure_diamond(w: float = 1.0, n: int = 3, L1=None, L2=None) -> DiamondGraphSpec:
    """T^G_3<(1,L1),(2,L2)> with mold G = T_4<(1,w),(3,w)>."""
    mold = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            if abs(i - j) in (1, 3):
                mold[i, j] = w
    if L1 is None:
        L1 = np.zeros((4, 4))
        L1[0, 3] = L1[3, 0] = 1.0
    if L2 is None:
        L2 = np.zeros((4, 4))
        L2[1, 2] = 1.0
    return DiamondGraphSpec((n,), 4, mold, [((1,), [L1]), ((2,), [L2])])


CATALOG = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "figure-toeplitz": figure_toeplitz,
    "figure-two-level": figure_two_level,
    "figure-diamond": figure_diamond,
}
