import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gridspec import catalog
from gridspec.graphs import ToeplitzGraphSpec, build
from gridspec.rearrangement import Rearrangement, rearrange, sample_symbol
from gridspec.spectral import (
    NumericalError,
    Spectrum,
    bandwidth,
    extreme_gap,
    gap_ratio,
    hermitian_eigs_small,
    householder_tridiagonalize,
    outlier_count,
    quantile_index,
    reference_eigvalsh,
    sym_eigs,
    tridiagonal_ql,
    weyl_errors,
)
from gridspec.symbol import symbol_of
from oracles import jacobi_eigenvalues, path_eigenvalues

small = arrays(np.float64, st.tuples(st.integers(1, 7), st.integers(1, 7)),
               elements=st.floats(-10, 10, allow_nan=False)).filter(lambda a: a.shape[0] == a.shape[1])


# --- oracles: Jacobi rotations and closed-form spectra

@settings(max_examples=40, deadline=None)
@given(small)
def test_reference_solver_matches_jacobi(A):
    S = A + A.T
    np.testing.assert_allclose(reference_eigvalsh(S), jacobi_eigenvalues(S),
                               atol=1e-9 * max(1, np.abs(S).max()))


def test_path_graph_closed_form():
    W = build(ToeplitzGraphSpec(100, [(1, 1.0)]))
    for method in ("dense", "banded", "reference"):
        ev = sym_eigs(W, method=method).eigenvalues
        assert np.max(np.abs(ev - path_eigenvalues(100))) <= 1e-8


def test_tridiagonal_ql_closed_form():
    n = 60
    ev = tridiagonal_ql(np.zeros(n), np.ones(n - 1))
    assert np.max(np.abs(ev - path_eigenvalues(n))) < 1e-12


def test_householder_preserves_spectrum():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((12, 12))
    A = A + A.T
    d, e = householder_tridiagonalize(A)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(np.linalg.eigvalsh(T), np.linalg.eigvalsh(A), atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(arrays(np.complex128, (3, 3), elements=st.complex_numbers(max_magnitude=5,
                                                                  allow_nan=False,
                                                                  allow_infinity=False)))
def test_hermitian_embedding_matches_numpy(M):
    H = M + M.conj().T
    np.testing.assert_allclose(hermitian_eigs_small(H), np.linalg.eigvalsh(H), atol=1e-9)


def test_hermitian_embedding_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigs_small(np.array([[0, 1], [0, 0]], dtype=complex))


# --- solver paths agree

@pytest.mark.parametrize("spec", [catalog.example1(150), catalog.example2(9), catalog.example3(40)])
def test_solver_paths_agree(spec):
    W = build(spec)
    ref = np.linalg.eigvalsh(W.toarray())
    for method in ("auto", "dense", "banded"):
        np.testing.assert_allclose(sym_eigs(W, method).eigenvalues, ref, atol=1e-10)


def test_auto_selects_banded_for_narrow_band():
    W = build(catalog.example1(400))
    assert bandwidth(W) == 4
    assert sym_eigs(W).method == "banded"
    assert sym_eigs(build(catalog.example1(30))).method == "dense"


def test_rejects_nonsymmetric_and_unknown_method():
    with pytest.raises(ValueError):
        sym_eigs(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        sym_eigs(np.eye(3), method="magic")
    with pytest.raises(ValueError):
        sym_eigs(np.ones((2, 3)))


def test_nonfinite_input_is_numerical_error():
    A = np.array([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(NumericalError):
        sym_eigs(A, method="dense")


def test_ql_non_convergence_raises():
    with pytest.raises(NumericalError):
        tridiagonal_ql(np.arange(30.0), np.ones(29), max_sweeps=0)


# --- statistics

def test_quantile_index_rounding():
    assert quantile_index(0.1, 100) == 10
    assert quantile_index(0.005, 100) == 1     # clamped
    assert quantile_index(1.0, 7) == 7
    assert quantile_index(0.25, 10) == 3       # round half up


def test_weyl_errors_zero_on_exact_input():
    n = 64
    s = sym_eigs(build(ToeplitzGraphSpec(n, [(1, 1.0)])))
    r = rearrange(sample_symbol(symbol_of(ToeplitzGraphSpec(n, [(1, 1.0)])), n))
    for e in weyl_errors(s, r, [0.1, 0.5, 0.8, 1.0], n=n):
        assert e.rel_error < 1e-12
        assert set(e.to_json()) == {"n", "x", "k", "lambda", "gtilde", "rel_error", "absolute"}


def test_weyl_errors_absolute_when_gtilde_vanishes():
    s = Spectrum(np.array([0.1, 1.0]))
    r = Rearrangement(np.array([0.0, 1.0]))
    e = weyl_errors(s, r, [0.5])[0]
    assert e.absolute and abs(e.rel_error - 0.1) < 1e-15


def test_gap_and_ratio():
    s = Spectrum(np.array([0.0, 1.0, 2.0, 2.5]))
    assert extreme_gap(s) == 2.0
    r = Rearrangement(np.array([0.0, 1.0, 2.0, 3.0]))
    g = gap_ratio(s, r, denominator="sample")
    assert g.predicted == 4.0 and g.ratio == 0.5 and g.ratio_error == 0.5
    flat = Rearrangement(np.ones(4))
    assert gap_ratio(s, flat).degenerate
    with pytest.raises(ValueError):
        extreme_gap(Spectrum(np.array([1.0])))


def test_outlier_count():
    s = Spectrum(np.array([-1.0, 0.5, 2.0, 5.0]))
    assert outlier_count(s, [(0.0, 1.0), (1.9, 2.1)]) == 2


def test_csv_is_exact():
    s = Spectrum(np.array([0.1, 1 / 3]))
    lines = s.to_csv().splitlines()
    assert lines[0] == "lambda"
    assert float(lines[2]) == 1 / 3
