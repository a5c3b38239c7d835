import json

import numpy as np
import pytest

from gridspec.apps import (
    FDDiskProblem,
    fd_disk_laplacian,
    fem_decomposition_residual,
    fem_quadratic_stiffness,
    fem_stencil_matrix,
    iga_cubic_stiffness,
    iga_graph_spec,
    iga_symbol,
    validate_application,
)
from gridspec.graphs import ToeplitzGraphSpec, build, graph_laplacian
from gridspec.rearrangement import rearrange, sample_symbol
from gridspec.spectral import sym_eigs, weyl_errors
from gridspec.symbol import symbol_of


# --- FEM: exact identity against the hand-written stencil

@pytest.mark.parametrize("n", [3, 10, 50])
def test_fem_identity(n):
    assert fem_decomposition_residual(n) <= 1e-14


def test_fem_small_display():
    M = fem_stencil_matrix(3)
    np.testing.assert_array_equal(M[0], [4, -2, 0, 0, 0, 0])
    np.testing.assert_array_equal(M[1], [-2, 8, -2, -2, 0, 0])
    np.testing.assert_array_equal(M[2], [0, -2, 4, -2, 0, 0])
    np.testing.assert_array_equal(M, M.T)
    A = fem_quadratic_stiffness(3).A
    assert A.normalization == 1.0
    np.testing.assert_allclose(A.matrix.toarray(), M)


def test_fem_potential_alternates():
    K = fem_quadratic_stiffness(4).K
    np.testing.assert_allclose(K[0::2], 4 / 3)
    np.testing.assert_allclose(K[1::2], 8 / 3)


def test_fem_symbol_branches():
    f = fem_quadratic_stiffness(5).predicted
    np.testing.assert_allclose(f.eval([0.0]).real, [[4 / 3, -4 / 3], [-4 / 3, 4 / 3]], atol=1e-15)
    np.testing.assert_allclose(f.eig([0.0]), [0, 8 / 3], atol=1e-12)
    np.testing.assert_allclose(f.eig([np.pi]), [4 / 3, 4], atol=1e-12)
    # T_n(f) is the normalized matrix itself
    n = 6
    res = fem_quadratic_stiffness(n)
    C0, C1 = f.coefficient(0).real, f.coefficient(1).real
    # block (i, j) is C_{i-j}
    T = np.kron(np.eye(n), C0) + np.kron(np.eye(n, k=-1), C1) + np.kron(np.eye(n, k=1), C1.T)
    np.testing.assert_allclose(T, res.A.matrix.toarray() / n, atol=1e-14)


def test_fem_report_two_clusters():
    n = 200
    res = fem_quadratic_stiffness(n)
    rep = validate_application(res.A.matrix / n, res.predicted, label="fem")
    ev = rep.spectrum.eigenvalues
    # lower branch covers [0, 4/3], upper branch [8/3, 4]
    assert np.sum((ev > 4 / 3 + 1e-9) & (ev < 8 / 3 - 1e-9)) <= 2
    assert rep.outliers <= 2
    assert max(e.rel_error for e in rep.errors) < 0.02


# --- IgA

def test_iga_stencil_arithmetic():
    f = iga_symbol()
    assert abs(f.eval_scalar([[0.0]])[0]) < 1e-15
    assert abs(f.eval_scalar([[np.pi]])[0] - 128 / 240) < 1e-15
    t = np.linspace(0, np.pi, 11)
    expect = (160 - 60 * np.cos(t) - 96 * np.cos(2 * t) - 4 * np.cos(3 * t)) / 240
    np.testing.assert_allclose(f.eval_scalar(t[:, None]), expect, atol=1e-14)


def test_iga_matrix_shape_and_band():
    n = 20
    A = iga_cubic_stiffness(n)[0].matrix.toarray() * 240
    np.testing.assert_array_equal(A, A.T)
    np.testing.assert_array_equal(A[0, :4], [360, 9, -60, -3])
    np.testing.assert_array_equal(A[1, :5], [9, 162, -8, -47, -2])
    np.testing.assert_array_equal(A[-1, -4:], [-3, -60, 9, 360])
    T = np.zeros((n, n))
    for k, c in enumerate([160, -30, -48, -2]):
        T += c * (np.eye(n, k=k) + (np.eye(n, k=-k) if k else 0))
    # rows 5 .. n-4 (1-based) are pure Toeplitz
    np.testing.assert_array_equal(A[4:n - 4], T[4:n - 4])
    np.testing.assert_array_equal(A[4:n - 4].sum(axis=1), 0)
    with pytest.raises(ValueError):
        iga_cubic_stiffness(8)


def test_iga_graph_form():
    n = 30
    W = build(iga_graph_spec(n)).toarray()
    L = graph_laplacian(W).toarray()
    T = iga_symbol()
    # interior rows of D - W coincide with T_n(f)
    A = iga_cubic_stiffness(n)[0].matrix.toarray()
    np.testing.assert_allclose(L[4:n - 4], A[4:n - 4], atol=1e-15)
    assert symbol_of(iga_graph_spec(n)).coefficient(2)[0, 0].real == 48 / 240
    assert T.coefficient(0)[0, 0].real == 160 / 240


def test_iga_errors_decrease():
    err = []
    for n in (256, 512, 1024):
        A, f = iga_cubic_stiffness(n)
        s = sym_eigs(A.matrix)
        r = rearrange(sample_symbol(f, n))
        err.append(max(e.rel_error for e in weyl_errors(s, r, [0.1, 0.5, 0.8])))
    assert err[0] > err[1] > err[2]


# --- FD on the disk

def test_fd_dimension_at_80():
    res = fd_disk_laplacian(FDDiskProblem(80))
    assert res.dim == 5140
    assert sum(res.kappa_classes.values()) == 5140


@pytest.mark.parametrize("n", [20, 40, 80])
def test_fd_positive_definite_and_in_range(n):
    res = fd_disk_laplacian(FDDiskProblem(n))
    D = res.delta
    assert (D != D.T).nnz == 0
    ev = sym_eigs(D).eigenvalues
    assert ev[0] > 0
    assert ev[-1] <= 10 + 1e-6


def test_fd_constant_coefficients_on_cube_match_five_point():
    # with p = 1 on a disk, every kept row has diagonal 4 + h^2 q
    n = 16
    res = fd_disk_laplacian(FDDiskProblem(n, p=lambda X: np.ones(len(X)),
                                          q=lambda X: np.zeros(len(X)), p_extension=1.0))
    np.testing.assert_allclose(res.delta.diagonal(), 4.0)


def test_fd_rejects_tiny_grid():
    with pytest.raises(ValueError):
        FDDiskProblem(3)


def test_fd_symbol_is_weighted_laplacian():
    res = fd_disk_laplacian(FDDiskProblem(10))
    g = res.predicted
    val = g.eval(np.array([[0.5, 0.5]]), np.array([[np.pi, np.pi]]))
    assert abs(val[0, 0, 0, 0].real - 8.0) < 1e-14


# --- validation driver

def test_validate_application_on_exact_toeplitz():
    spec = ToeplitzGraphSpec(300, [(1, 1.0), (2, -0.5)])
    rep = validate_application(build(spec), symbol_of(spec), label="toeplitz", n=300)
    assert max(e.rel_error for e in rep.errors) < 2e-2
    assert rep.outliers == 0
    js = json.loads(json.dumps(rep.to_json()))
    assert js["dim"] == 300 and len(js["weyl_errors"]) == 4
    assert rep.errors_csv().splitlines()[0] == "n,x,k,lambda,gtilde,rel_error"
