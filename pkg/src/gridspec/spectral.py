"""Symmetric eigensolvers and spectral comparison statistics.

``sym_eigs`` reduces to tridiagonal form and runs an implicitly shifted
QL/QR iteration.  The production path calls LAPACK (dsyev for dense input,
the band driver for narrow-banded input); ``reference_eigvalsh`` is a
self-contained numpy implementation of the same algorithm, used as an
independent check and for tiny Hermitian evaluations.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp


class NumericalError(RuntimeError):
    """Eigensolver failure (non-convergence or LAPACK error)."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    method: str = ""

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float).ravel()
        if ev.size and np.any(np.diff(ev) < 0):
            ev = np.sort(ev)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, k):
        return self.eigenvalues[k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("lambda\n")
        for v in self.eigenvalues:
            buf.write(f"{v:.17g}\n")
        return buf.getvalue()


# ------------------------------------------------------------ eigensolvers

def _is_exactly_symmetric(A) -> bool:
    if sp.issparse(A):
        D = (A - A.T).tocoo()
        return D.nnz == 0 or not np.any(D.data)
    return np.array_equal(A, A.T)


def bandwidth(A) -> int:
    if sp.issparse(A):
        C = A.tocoo()
        return int(np.max(np.abs(C.row - C.col), initial=0))
    r, c = np.nonzero(A)
    return int(np.max(np.abs(r - c), initial=0))


def _to_lower_band(A, b: int) -> np.ndarray:
    C = sp.coo_matrix(A)
    dim = C.shape[0]
    keep = C.row >= C.col
    r, c, v = C.row[keep], C.col[keep], C.data[keep]
    ab = np.zeros((b + 1, dim))
    np.add.at(ab, (r - c, c), v)
    return ab


def sym_eigs(A, method: str = "auto") -> Spectrum:
    """Full ascending spectrum of a real symmetric matrix.

    method: "auto" (band driver when the bandwidth is small, dsyev otherwise),
    "dense", "banded" or "reference" (the numpy QL implementation).
    """
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    data = A.data if sp.issparse(A) else np.asarray(A)
    if not np.all(np.isfinite(data)):
        raise NumericalError("matrix has non-finite entries")
    if not _is_exactly_symmetric(A):
        raise ValueError("matrix is not exactly symmetric")
    dim = A.shape[0]
    if dim == 0:
        return Spectrum(np.zeros(0), method)
    b = bandwidth(A)
    if method == "auto":
        method = "banded" if dim > 64 and 4 * (b + 1) < dim else "dense"
    try:
        if method == "banded":
            ab = _to_lower_band(A, b)
            ev = sla.eig_banded(ab, lower=True, eigvals_only=True, check_finite=True)
        elif method == "dense":
            M = A.toarray() if sp.issparse(A) else np.array(A, dtype=float)
            ev = sla.eigh(M, eigvals_only=True, driver="ev", check_finite=True)
        elif method == "reference":
            M = A.toarray() if sp.issparse(A) else np.array(A, dtype=float)
            ev = reference_eigvalsh(M)
        else:
            raise ValueError(f"unknown method {method!r}")
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NumericalError(str(exc)) from exc
    return Spectrum(np.sort(ev), method)


def householder_tridiagonalize(A) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal similarity reduction of a symmetric matrix to tridiagonal form.

    Returns (diagonal, subdiagonal).
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += np.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        S = A[k + 1:, k + 1:]
        # two-sided update with H = I - 2 v v^T
        p = S @ v
        K = v @ p
        q = p - K * v
        S -= 2.0 * (np.outer(v, q) + np.outer(q, v))
        A[k + 1:, k + 1:] = S
        beta = -np.copysign(alpha, x[0])
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = A[k, k + 1] = beta
    return np.diag(A).copy(), np.diag(A, -1).copy()


def tridiagonal_ql(diag, sub, tol: float = 1e-14, max_sweeps: int = 50) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method."""
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[:n - 1] = np.asarray(sub, dtype=float)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd or abs(e[m]) < np.finfo(float).tiny:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                raise NumericalError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d)


def reference_eigvalsh(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape == (1, 1):
        return A.ravel().copy()
    d, e = householder_tridiagonalize(A)
    return tridiagonal_ql(d, e)


def hermitian_eigs_small(H, tol: float = 1e-12) -> np.ndarray:
    """Spectrum of a small Hermitian matrix via its real symmetric embedding.

    [[Re H, -Im H], [Im H, Re H]] has every eigenvalue of H twice.
    """
    H = np.asarray(H, dtype=complex)
    nu = H.shape[0]
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    if np.max(np.abs(H - H.conj().T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    H = 0.5 * (H + H.conj().T)
    R = np.block([[H.real, -H.imag], [H.imag, H.real]])
    R = 0.5 * (R + R.T)
    ev = reference_eigvalsh(R)
    return 0.5 * (ev[0::2] + ev[1::2])[:nu]


# ------------------------------------------------------------- statistics

@dataclass(frozen=True)
class WeylError:
    n: object
    x: float
    k: int
    lam: float
    gtilde: float
    rel_error: float
    absolute: bool = False

    def to_json(self) -> dict:
        return {"n": self.n, "x": self.x, "k": self.k, "lambda": self.lam,
                "gtilde": self.gtilde, "rel_error": self.rel_error,
                "absolute": self.absolute}


def quantile_index(x: float, dim: int) -> int:
    """k(n) = round(x d_n) clamped to [1, d_n] (1-based)."""
    return int(min(max(int(np.floor(x * dim + 0.5)), 1), dim))


def weyl_errors(s: Spectrum, r, quantiles: Sequence[float], n=None) -> list[WeylError]:
    """|lambda_k / gtilde(k/d) - 1| at k = round(x d) for each quantile x."""
    out = []
    for x in quantiles:
        k = quantile_index(float(x), s.dim)
        lam = float(s.eigenvalues[k - 1])
        gt = float(r.quantile(k / s.dim))
        if gt == 0.0:
            out.append(WeylError(n, float(x), k, lam, gt, abs(lam - gt), True))
        else:
            out.append(WeylError(n, float(x), k, lam, gt, abs(lam / gt - 1.0)))
    return out


def extreme_gap(s: Spectrum) -> float:
    if s.dim < 2:
        raise ValueError("need at least two eigenvalues")
    return float(s.dim * (s.eigenvalues[-1] - s.eigenvalues[-2]))


@dataclass(frozen=True)
class GapReport:
    raw_gap: float
    predicted: Optional[float]
    ratio: Optional[float]
    x: float
    degenerate: bool = False

    @property
    def ratio_error(self) -> Optional[float]:
        return None if self.ratio is None else abs(self.ratio - 1.0)

    def to_json(self) -> dict:
        return {"raw_gap": self.raw_gap, "predicted": self.predicted, "ratio": self.ratio,
                "ratio_error": self.ratio_error, "x": self.x, "degenerate": self.degenerate}


def gap_ratio(s: Spectrum, r, tau: Callable[[float], float] | None = None,
              dtau: Callable[[float], float] | None = None,
              denominator: str = "derivative") -> GapReport:
    """Compare d [tau(l_d) - tau(l_{d-1})] with tau'(g(x)) g'(x).

    denominator="derivative" uses x = 1 - 1/d and the backward difference of
    the rearrangement there; "sample" uses x = 1, i.e. the gap between the
    two largest rearrangement samples scaled by N.
    """
    tau = tau or (lambda t: t)
    dtau = dtau or (lambda t: 1.0)
    dim = s.dim
    raw = dim * (tau(float(s.eigenvalues[-1])) - tau(float(s.eigenvalues[-2])))
    if denominator == "derivative":
        x = 1.0 - 1.0 / dim
    elif denominator == "sample":
        x = 1.0
    else:
        raise ValueError(f"unknown denominator {denominator!r}")
    pred = dtau(float(r.quantile(x))) * r.derivative_at(x)
    if pred == 0.0 or not np.isfinite(pred):
        return GapReport(float(raw), float(pred), None, x, True)
    return GapReport(float(raw), float(pred), float(raw / pred), x)


def outliers(s: Spectrum, intervals, margin: float = 1e-8) -> np.ndarray:
    ev = s.eigenvalues
    inside = np.zeros(ev.size, dtype=bool)
    for a, b in intervals:
        inside |= (ev >= a - margin) & (ev <= b + margin)
    return ev[~inside]


def outlier_count(s: Spectrum, intervals, margin: float = 1e-8) -> int:
    return int(outliers(s, intervals, margin).size)


def cdf_distance(s: Spectrum, r, points: int = 100) -> float:
    """sup over a t-grid of |#{lambda <= t}/d - phi(t)|."""
    lo = min(s.eigenvalues[0], r.sorted[0])
    hi = max(s.eigenvalues[-1], r.sorted[-1])
    t = np.linspace(lo, hi, points)
    emp = np.searchsorted(s.eigenvalues, t, side="right") / s.dim
    return float(np.max(np.abs(emp - r.phi(t))))
