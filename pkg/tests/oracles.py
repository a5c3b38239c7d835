"""Independent reference implementations used by the tests.

These deliberately avoid the package code paths: plain loops over node
pairs, direct trigonometric sums and closed-form spectra.
"""
import itertools

import numpy as np


def dense_adjacency(n, nu, mold, blocks):
    """Adjacency by brute force over all ordered pairs of nodes.

    Node (i, a) with 1-based grid index i and 0-based diamond position a sits
    at row lex(i) * nu + a.  Entry ((i,a),(j,b)) is B[a,b] when i - j = k,
    B[b,a] when j - i = k, and mold[a,b] when i = j.
    """
    n = tuple(n)
    grid = list(itertools.product(*[range(1, m + 1) for m in n]))
    where = {g: p for p, g in enumerate(grid)}
    A = np.zeros((len(grid) * nu, len(grid) * nu))
    for i in grid:
        for j in grid:
            diff = tuple(a - b for a, b in zip(i, j))
            for a in range(nu):
                for b in range(nu):
                    v = 0.0
                    if all(c == 0 for c in diff):
                        v = mold[a][b]
                    for k, B in blocks:
                        if diff == tuple(k):
                            v += B[a][b]
                        if diff == tuple(-c for c in k):
                            v += B[b][a]
                    A[where[i] * nu + a, where[j] * nu + b] = v
    return A


def symbol_by_sum(coeffs, theta):
    """sum_k C_k exp(i k.theta) evaluated term by term."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = None
    for k, C in coeffs.items():
        phase = np.exp(1j * sum(a * t for a, t in zip(k, theta)))
        term = phase * np.asarray(C, dtype=complex)
        out = term if out is None else out + term
    return out


def path_eigenvalues(n):
    k = np.arange(1, n + 1)
    return np.sort(2 * np.cos(k * np.pi / (n + 1)))


def dirichlet_laplacian_eigenvalues(n):
    h = 1.0 / (n + 1)
    i = np.arange(1, n + 1)
    a = 2 - 2 * np.cos(i * np.pi * h)
    return np.sort((a[:, None] + a[None, :]).ravel())


def jacobi_eigenvalues(A, tol=1e-13, sweeps=100):
    """Cyclic Jacobi rotations; slow but entirely independent of LAPACK."""
    A = np.array(A, dtype=float)
    m = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(max(0.0, np.sum(A ** 2) - np.sum(np.diag(A) ** 2)))
        scale = max(1.0, np.linalg.norm(A))
        if off < tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                if abs(A[p, q]) < 1e-16 * scale:
                    continue
                tau = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = np.sign(tau) / (abs(tau) + np.sqrt(1 + tau * tau)) if tau != 0 else 1.0
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                R = np.eye(m)
                R[p, p] = R[q, q] = c
                R[p, q] = s
                R[q, p] = -s
                A = R.T @ A @ R
    return np.sort(np.diag(A))
