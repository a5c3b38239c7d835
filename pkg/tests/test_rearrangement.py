import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridspec import catalog
from gridspec.domains import disk
from gridspec.graphs import ToeplitzGraphSpec, build
from gridspec.rearrangement import (
    Rearrangement,
    SampleCloud,
    rearrange,
    sample_symbol,
    spatial_grid,
    theta_grid,
)
from gridspec.spectral import cdf_distance, sym_eigs
from gridspec.symbol import laplacian_symbol, symbol_of


def cos_symbol():
    return symbol_of(ToeplitzGraphSpec(8, [(1, 1.0)]))


# --- oracle: closed form of the rearrangement of 2cos(theta)

@pytest.mark.parametrize("N", [50, 200, 1000])
def test_cosine_rearrangement_closed_form(N):
    r = rearrange(sample_symbol(cos_symbol(), N))
    x = np.linspace(1.0 / N, 1.0, 4 * N)
    err = np.max(np.abs(r.quantile(x) - (-2 * np.cos(np.pi * x))))
    assert err <= 2 * np.pi / N


def test_interior_samples_equal_path_spectrum():
    # sorted 2cos(j pi/(n+1)) is exactly the spectrum of the path graph
    n = 40
    r = rearrange(sample_symbol(cos_symbol(), n))
    np.testing.assert_allclose(r.sorted, np.sort(2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))),
                               atol=1e-14)


def test_grids():
    np.testing.assert_allclose(theta_grid(3), [np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    np.testing.assert_allclose(theta_grid(3, half=False), [-np.pi / 2, 0, np.pi / 2])
    np.testing.assert_allclose(theta_grid(3, closed=True), [0, np.pi / 2, np.pi])
    np.testing.assert_allclose(spatial_grid(4), [0.2, 0.4, 0.6, 0.8])
    with pytest.raises(ValueError):
        theta_grid(0)


# --- rearrangement object

@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=60))
def test_rearrangement_properties(vals):
    r = rearrange(SampleCloud(np.array(vals)))
    assert np.all(np.diff(r.sorted) >= 0)
    np.testing.assert_array_equal(r.quantile(r.grid), r.sorted)
    # phi(g(x)) >= x on the sample grid
    assert np.all(r.phi(r.sorted) >= r.grid - 1e-12)
    assert r.phi(r.sorted[-1]) == 1.0


def test_rejects_unsorted_and_out_of_range():
    with pytest.raises(ValueError):
        Rearrangement(np.array([2.0, 1.0]))
    r = Rearrangement(np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        r.quantile(1.5)
    with pytest.raises(ValueError):
        r.derivative_at(0.1)


def test_derivative_at_one_is_scaled_top_gap():
    r = Rearrangement(np.array([0.0, 1.0, 3.0, 7.0]))
    assert r.derivative_at(1.0) == 4 * (7.0 - 3.0)


def test_matrix_symbol_merges_branches():
    f = symbol_of(catalog.example3(6))
    cloud = sample_symbol(f, 25)
    assert cloud.size == 100
    assert cloud.grid_meta["half"] is True


def test_weighted_symbol_uses_interior_domain_points():
    f = symbol_of(catalog.example2(4))
    g = laplacian_symbol(f, 4.0, lambda X: np.ones(len(X)), disk())
    cloud = sample_symbol(g, 10)
    inside = disk()(np.stack(np.meshgrid(spatial_grid(10), spatial_grid(10), indexing="ij"),
                             axis=-1).reshape(-1, 2))
    assert cloud.grid_meta["spatial_points"] == int(inside.sum())
    assert cloud.size == int(inside.sum()) * 100


def test_csv_header_and_rows():
    r = Rearrangement(np.array([1.0, 2.0]))
    lines = r.to_csv().splitlines()
    assert lines[0] == "x,gtilde"
    assert lines[1:] == ["0.5,1", "1,2"]


def test_cdf_distance_decreases_with_n():
    f = symbol_of(catalog.example1(10))
    dist = []
    for n in (128, 256, 512):
        s = sym_eigs(build(catalog.example1(n)))
        dist.append(cdf_distance(s, rearrange(sample_symbol(f, n))))
    assert dist[0] > dist[1] > dist[2]


def test_endpoint_positions():
    r = Rearrangement(np.array([0.0, 1.0, 4.0]), positions="endpoints")
    assert np.allclose(r.grid, [0.0, 0.5, 1.0])
    assert r.quantile(0.25) == pytest.approx(0.5)
    assert r.quantile(1.0) == 4.0 and r.quantile(0.0) == 0.0
    with pytest.raises(ValueError):
        Rearrangement(np.array([0.0, 1.0]), positions="left")
    cloud = sample_symbol(cos_symbol(), 50, closed=True)
    assert rearrange(cloud, positions="endpoints").positions == "endpoints"
