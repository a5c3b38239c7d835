import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gridspec.multiindex import (
    MultiIndex,
    box_indices,
    box_positions,
    componentwise_le,
    delinearize,
    direction_set,
    grid_size,
    lex_compare,
    linearize,
)

boxes = st.lists(st.integers(1, 5), min_size=1, max_size=3)


# --- oracles first: itertools / numpy orderings

@given(boxes)
def test_box_indices_match_itertools_product(n):
    expect = np.array(list(itertools.product(*[range(1, m + 1) for m in n])))
    np.testing.assert_array_equal(box_indices(n), expect)


@given(boxes, st.data())
def test_linearize_matches_ravel_multi_index(n, data):
    k = [data.draw(st.integers(1, m)) for m in n]
    assert linearize(k, n) == np.ravel_multi_index(tuple(a - 1 for a in k), tuple(n))
    assert box_positions(np.array([k]), n)[0] == linearize(k, n)


@given(boxes, st.data())
def test_delinearize_inverts_linearize(n, data):
    pos = data.draw(st.integers(0, grid_size(n) - 1))
    assert linearize(delinearize(pos, n), n) == pos


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2),
       st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_lex_compare_matches_tuple_order(a, b):
    expect = (a > b) - (a < b)
    assert lex_compare(a, b) == expect
    assert (MultiIndex(a) < MultiIndex(b)) == (tuple(a) < tuple(b))


# --- behaviour

def test_arithmetic_and_nnz():
    i, j = MultiIndex((2, 0, -3)), MultiIndex((1, 1, 1))
    assert tuple(i + j) == (3, 1, -2)
    assert tuple(i - j) == (1, -1, -4)
    assert tuple(-i) == (-2, 0, 3)
    assert tuple(abs(i)) == (2, 0, 3)
    assert i.nnz() == 2
    np.testing.assert_allclose(i.hadamard([0.5, 1.0, 2.0]), [1.0, 0.0, -6.0])


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        MultiIndex((1, 2)) + MultiIndex((1, 2, 3))


def test_componentwise_order_is_partial():
    assert componentwise_le((1, 2), (2, 2))
    assert not componentwise_le((1, 3), (2, 2))
    assert not componentwise_le((2, 2), (1, 3))


def test_direction_classes_of_1_1():
    ds = direction_set((1, 1))
    assert [tuple(v) for v in ds.classes] == [(1, -1), (1, 1)]
    assert ds.sign_patterns == 4
    v, w = ds.members(0)
    assert tuple(w) == (-1, 1)


@pytest.mark.parametrize("t,count", [((2, 0), 1), ((0, 3), 1), ((1, 2, 3), 4), ((0, 1, 1), 2)])
def test_class_count_is_half_the_sign_patterns(t, count):
    ds = direction_set(t)
    assert len(ds) == count == ds.sign_patterns // 2
    for v in ds.classes:
        first = next(a for a in v if a != 0)
        assert first > 0


def test_direction_set_rejects_zero_and_negative():
    with pytest.raises(ValueError):
        direction_set((0, 0))
    with pytest.raises(ValueError):
        direction_set((1, -1))


def test_grid_size_and_bounds():
    assert grid_size((3, 4, 5)) == 60
    with pytest.raises(ValueError):
        grid_size((3, 0))
    with pytest.raises(ValueError):
        linearize((4, 1), (3, 3))
    with pytest.raises(ValueError):
        delinearize(9, (3, 3))
