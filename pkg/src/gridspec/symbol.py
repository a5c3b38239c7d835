"""Trigonometric-polynomial symbols of graph sequences.

A symbol is stored coefficient-side: f(theta) = sum_k C_k exp(i k.theta)
with nu x nu matrices C_k satisfying C_{-k} = C_k^H.  The matrix of a graph
with block structure is then [C_{i-j}], i.e. the Toeplitz matrix T_n(f).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .domains import DomainPredicate, cube
from .graphs import BlockStructure, GraphSpec
from .spectral import hermitian_eigs_small

HERMITIAN_TOL = 1e-12


class SymbolError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TrigSymbol:
    d: int
    nu: int
    offsets: np.ndarray      # (m, d) integer offsets k, sorted lexicographically
    coeffs: np.ndarray       # (m, nu, nu) complex C_k

    def __post_init__(self):
        K = np.asarray(self.offsets, dtype=np.int64).reshape(-1, self.d)
        C = np.asarray(self.coeffs, dtype=complex).reshape(-1, self.nu, self.nu)
        order = np.lexsort(K.T[::-1]) if len(K) else np.zeros(0, dtype=int)
        object.__setattr__(self, "offsets", K[order])
        object.__setattr__(self, "coeffs", C[order])
        self._check_closure()

    @classmethod
    def from_dict(cls, d: int, nu: int, coeffs: dict) -> "TrigSymbol":
        acc: dict[tuple, np.ndarray] = {}
        for k, C in coeffs.items():
            k = tuple(int(a) for a in np.atleast_1d(k))
            acc[k] = acc.get(k, 0) + np.asarray(C, dtype=complex).reshape(nu, nu)
        keys = sorted(acc)
        return cls(d, nu, np.array(keys, dtype=np.int64).reshape(-1, d),
                   np.array([acc[k] for k in keys]).reshape(-1, nu, nu))

    def _check_closure(self) -> None:
        lookup = {tuple(k): C for k, C in zip(self.offsets, self.coeffs)}
        for k, C in lookup.items():
            Cm = lookup.get(tuple(-a for a in k))
            if Cm is None:
                if np.any(C):
                    raise SymbolError(f"coefficient for {k} has no Hermitian partner")
                continue
            if np.max(np.abs(Cm - C.conj().T), initial=0.0) > HERMITIAN_TOL:
                raise SymbolError(f"C_{{-k}} != C_k^H for k={k}")

    def coefficient(self, k) -> np.ndarray:
        k = tuple(int(a) for a in np.atleast_1d(k))
        for kk, C in zip(self.offsets, self.coeffs):
            if tuple(kk) == k:
                return C.copy()
        return np.zeros((self.nu, self.nu), dtype=complex)

    @property
    def is_real(self) -> bool:
        """True when every evaluation is a real symmetric matrix."""
        return bool(np.all(self.coeffs.imag == 0)) and all(
            np.array_equal(C, C.T) for C in self.coeffs)

    def eval(self, theta) -> np.ndarray:
        """Evaluate at theta of shape (d,) or (M, d); returns (nu, nu) or (M, nu, nu)."""
        th = np.asarray(theta, dtype=float)
        single = th.ndim <= 1
        th = th.reshape(-1, self.d)
        E = np.exp(1j * (th @ self.offsets.T.astype(float)))
        F = np.einsum("mk,kab->mab", E, self.coeffs)
        dev = np.max(np.abs(F - np.conj(np.swapaxes(F, 1, 2))), initial=0.0)
        scale = max(1.0, float(np.max(np.abs(self.coeffs), initial=0.0)))
        if dev > 1e-10 * scale:
            raise SymbolError(f"non-Hermitian evaluation (deviation {dev:.3e})")
        F = 0.5 * (F + np.conj(np.swapaxes(F, 1, 2)))
        return F[0] if single else F

    def eval_scalar(self, theta) -> np.ndarray:
        if self.nu != 1:
            raise SymbolError("scalar evaluation needs nu = 1")
        return self.eval(np.asarray(theta).reshape(-1, self.d))[:, 0, 0].real

    def eig(self, theta) -> np.ndarray:
        """Ascending eigenvalues of f(theta); batched for (M, d) input."""
        th = np.asarray(theta, dtype=float)
        if th.ndim <= 1:
            return eig_symbol(self, th)
        F = self.eval(th)
        if self.nu == 1:
            return F.real.reshape(-1, 1)
        return np.linalg.eigvalsh(F)

    def reflection_invariant(self) -> bool:
        """True if the eigenvalues of f are unchanged by theta_r -> -theta_r for each r.

        Sufficient test on real coefficients: flipping axis r maps f(theta)
        to f(theta) or to f(theta)^T, i.e. C_{k'} = C_k for all k or
        C_{k'} = C_k^T for all k, where k' is k with its r-th entry negated.
        When it holds, sampling [0, pi]^d captures the whole distribution.
        """
        if np.any(self.coeffs.imag != 0):
            return False
        lookup = {tuple(k): C.real for k, C in zip(self.offsets, self.coeffs)}
        zero = np.zeros((self.nu, self.nu))
        for r in range(self.d):
            same = transposed = True
            for k, C in lookup.items():
                kr = list(k)
                kr[r] = -kr[r]
                other = lookup.get(tuple(kr), zero)
                same &= bool(np.max(np.abs(other - C)) <= HERMITIAN_TOL)
                transposed &= bool(np.max(np.abs(other - C.T)) <= HERMITIAN_TOL)
            if not (same or transposed):
                return False
        return True

    def to_json(self) -> dict:
        return {"d": self.d, "nu": self.nu,
                "coeffs": [{"k": [int(a) for a in k], "re": C.real.tolist(), "im": C.imag.tolist()}
                           for k, C in zip(self.offsets, self.coeffs)]}

    @classmethod
    def from_json(cls, obj: dict) -> "TrigSymbol":
        d, nu = int(obj["d"]), int(obj["nu"])
        coeffs = {tuple(c["k"]): np.asarray(c["re"]) + 1j * np.asarray(c["im"])
                  for c in obj["coeffs"]}
        return cls.from_dict(d, nu, coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def symbol_of_structure(s: BlockStructure) -> TrigSymbol:
    coeffs: dict[tuple, np.ndarray] = {}
    if np.any(s.mold):
        coeffs[(0,) * s.d] = s.mold
    for k, B in s.blocks:
        coeffs[tuple(k)] = coeffs.get(tuple(k), 0) + B
        mk = tuple(-a for a in k)
        coeffs[mk] = coeffs.get(mk, 0) + B.T
    if not coeffs:
        coeffs[(0,) * s.d] = np.zeros((s.nu, s.nu))
    return TrigSymbol.from_dict(s.d, s.nu, coeffs)


def symbol_of_toeplitz(spec) -> TrigSymbol:
    return symbol_of_structure(spec.structure())


def symbol_of_dlevel(spec) -> TrigSymbol:
    return symbol_of_structure(spec.structure())


def symbol_of_diamond(spec) -> TrigSymbol:
    return symbol_of_structure(spec.structure())


def symbol_of(spec: GraphSpec) -> TrigSymbol:
    return symbol_of_structure(spec.structure())


def eig_symbol(sym: TrigSymbol, theta) -> np.ndarray:
    """Ascending eigenvalues of the nu x nu evaluation at a single point."""
    F = sym.eval(np.asarray(theta, dtype=float).reshape(sym.d))
    if sym.nu == 1:
        return np.array([F[0, 0].real])
    return hermitian_eigs_small(F)


def affine_symbol(sym: TrigSymbol, c: float, sign: float = -1.0) -> TrigSymbol:
    """The trigonometric polynomial c I + sign * f."""
    coeffs = {tuple(k): sign * C for k, C in zip(sym.offsets, sym.coeffs)}
    zero = (0,) * sym.d
    coeffs[zero] = coeffs.get(zero, 0) + c * np.eye(sym.nu)
    return TrigSymbol.from_dict(sym.d, sym.nu, coeffs)


def scale_symbol(sym: TrigSymbol, a: float) -> TrigSymbol:
    return TrigSymbol(sym.d, sym.nu, sym.offsets, a * sym.coeffs)


@dataclass(frozen=True, eq=False)
class WeightedSymbol:
    """g(x, theta) = p(x) * h(theta) with x in a domain of [0,1]^ds.

    ``frequency`` is the trigonometric polynomial h; when built by
    :func:`laplacian_symbol` it already holds c I - f.
    """

    spatial: Callable[[np.ndarray], np.ndarray]
    frequency: TrigSymbol
    domain: DomainPredicate
    spatial_dim: int
    affine: Optional[tuple[float, float]] = None

    @property
    def nu(self) -> int:
        return self.frequency.nu

    def eval(self, x, theta) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        p = np.asarray(self.spatial(x), dtype=float).reshape(-1)
        F = self.frequency.eval(np.asarray(theta, dtype=float).reshape(-1, self.frequency.d))
        return p[:, None, None, None] * F[None]


def weighted_symbol(sym: TrigSymbol, p, domain: DomainPredicate | None = None,
                    spatial_dim: int | None = None) -> WeightedSymbol:
    dim = sym.d if spatial_dim is None else spatial_dim
    return WeightedSymbol(p, sym, domain or cube(), dim)


def laplacian_symbol(sym: TrigSymbol, c: float, p, domain: DomainPredicate | None = None,
                     spatial_dim: int | None = None) -> WeightedSymbol:
    """p(x) (c I - f(theta)), the symbol of D + K - W when D + K ~ c diag(p)."""
    dim = sym.d if spatial_dim is None else spatial_dim
    return WeightedSymbol(p, affine_symbol(sym, c, -1.0), domain or cube(), dim,
                          affine=(float(c), -1.0))


def fourier_coefficient(f: Callable[[np.ndarray], np.ndarray], k, d: int, nu: int,
                        points: int = 2048) -> np.ndarray:
    """(2 pi)^-d int f(theta) exp(-i k.theta) dtheta by the periodic rectangle rule."""
    g = -np.pi + 2 * np.pi * np.arange(points) / points
    mesh = np.meshgrid(*([g] * d), indexing="ij")
    th = np.stack([m.ravel() for m in mesh], axis=1)
    F = np.asarray(f(th)).reshape(-1, nu, nu)
    w = np.exp(-1j * (th @ np.asarray(k, dtype=float).reshape(d)))
    return np.einsum("m,mab->ab", w, F) / th.shape[0]


def image_intervals(sym, points_per_axis: int | None = None, merge_tol: float = 1e-9,
                    half: bool | None = None) -> list[tuple[float, float]]:
    """Closed intervals covering the image set R_f: one per eigenvalue branch, merged.

    Each ordered eigenvalue branch is continuous on the connected domain, so
    its image is [min, max] of the branch; both are estimated by dense sampling.
    """
    from .rearrangement import theta_grid

    if isinstance(sym, WeightedSymbol):
        raise SymbolError("image intervals are computed for frequency symbols only")
    if points_per_axis is None:
        points_per_axis = max(8, int(round(10 ** (4 / sym.d))))
    if half is None:
        half = sym.reflection_invariant()
    ax = theta_grid(points_per_axis, half=half, closed=True)
    mesh = np.meshgrid(*([ax] * sym.d), indexing="ij")
    th = np.stack([m.ravel() for m in mesh], axis=1)
    B = sym.eig(th)
    iv = sorted((float(B[:, j].min()), float(B[:, j].max())) for j in range(sym.nu))
    merged = [list(iv[0])]
    for a, b in iv[1:]:
        if a <= merged[-1][1] + merge_tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def scalar_extremes(sym: TrigSymbol, points_per_axis: int | None = None) -> tuple[float, float]:
    """min f and max f of a real scalar symbol: dense grid, then local polishing."""
    from scipy.optimize import minimize

    if sym.nu != 1:
        raise SymbolError("scalar extremes need nu = 1")
    if points_per_axis is None:
        points_per_axis = 4096 if sym.d == 1 else 256 if sym.d == 2 else 32
    ax = -np.pi + 2 * np.pi * np.arange(points_per_axis) / points_per_axis
    mesh = np.meshgrid(*([ax] * sym.d), indexing="ij")
    th = np.stack([m.ravel() for m in mesh], axis=1)
    vals = sym.eval_scalar(th)
    out = []
    for sgn in (1.0, -1.0):
        i0 = int(np.argmin(sgn * vals))
        res = minimize(lambda t: sgn * float(sym.eval_scalar(t)[0]), th[i0],
                       method="Nelder-Mead", options={"xatol": 1e-13, "fatol": 1e-15,
                                                      "maxiter": 4000})
        out.append(sgn * min(sgn * vals[i0], res.fun))
    return out[0], out[1]
