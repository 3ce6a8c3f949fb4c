import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import dilate_oracle, erode_oracle
from vesselkit.morphology import CROSS, StructuringElement, close, complement, dilate, erode

masks = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(0, 1))
PLUS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], np.uint8)


def test_dilate_single_pixel():
    mask = np.zeros((3, 3), np.uint8)
    mask[1, 1] = 1
    assert np.array_equal(dilate(mask), PLUS)


def test_dilate_corner_clipped():
    mask = np.zeros((4, 4), np.uint8)
    mask[0, 0] = 1
    out = dilate(mask)
    assert out.sum() == 3 and out[0, 0] and out[0, 1] and out[1, 0]


def test_all_black_stays_black():
    zero = np.zeros((5, 5), np.uint8)
    assert not dilate(zero).any() and not erode(zero).any() and not close(zero).any()


def test_erode_plus_and_isolated():
    assert erode(PLUS).tolist() == [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    single = np.zeros((3, 3), np.uint8)
    single[1, 1] = 1
    assert not erode(single).any()


def test_erode_all_white_loses_border():
    out = erode(np.ones((5, 6), np.uint8))
    expected = np.zeros((5, 6), np.uint8)
    expected[1:-1, 1:-1] = 1
    assert np.array_equal(out, expected)


def test_close_fills_gap_between_thick_bars():
    mask = np.zeros((7, 9), np.uint8)
    mask[2:5, 1:4] = 1
    mask[2:5, 5:8] = 1
    closed = close(mask)
    # only the middle row has white above and below after dilation
    assert closed[:, 4].tolist() == [0, 0, 0, 1, 0, 0, 0]


def test_close_keeps_gap_between_single_pixels():
    # the erosion needs the pixels above and below the gap, which dilation never set
    mask = np.array([[0, 0, 0, 0, 0], [0, 1, 0, 1, 0], [0, 0, 0, 0, 0]], np.uint8)
    assert np.array_equal(close(mask), mask)


def test_close_equals_composition_away_from_border():
    mask = np.zeros((9, 9), np.uint8)
    mask[3:6, 2] = 1
    mask[4, 4:7] = 1
    assert np.array_equal(close(mask), erode(dilate(mask)))


def test_close_keeps_border_pixels():
    mask = np.zeros((4, 4), np.uint8)
    mask[0, :] = 1
    assert np.array_equal(close(mask), mask)
    assert not erode(dilate(mask))[0, 0]


def test_close_fills_interior_hole():
    mask = np.zeros((7, 7), np.uint8)
    mask[1:6, 1:6] = 1
    mask[3, 3] = 0
    # dilation covers the hole; erosion keeps it since all four arms are white
    expected = mask.copy()
    expected[3, 3] = 1
    assert np.array_equal(close(mask), expected)


def test_extra_dilations_thicken():
    mask = np.zeros((9, 9), np.uint8)
    mask[4, 2:7] = 1
    assert close(mask, dilations=2, erosions=1).sum() > close(mask).sum()


@settings(max_examples=60, deadline=None)
@given(masks)
def test_matches_definition_oracle(mask):
    assert np.array_equal(dilate(mask), dilate_oracle(mask, CROSS))
    assert np.array_equal(erode(mask), erode_oracle(mask, CROSS))


@settings(max_examples=40, deadline=None)
@given(masks)
def test_asymmetric_element(mask):
    se = StructuringElement([(0, 0), (2, 0), (1, -1)])
    assert np.array_equal(dilate(mask, se), dilate_oracle(mask, se))
    assert np.array_equal(erode(mask, se), erode_oracle(mask, se))


@given(masks)
def test_duality_under_complement(mask):
    # pad the complement with white so out-of-bounds reads agree with the original's background
    padded = np.pad(complement(mask), 1, constant_values=1)
    dual = complement(erode(padded, CROSS.reflected())[1:-1, 1:-1])
    assert np.array_equal(dilate(mask), dual)


@given(masks)
def test_closing_extensive_and_idempotent(mask):
    closed = close(mask)
    assert np.all(closed >= mask)
    assert np.array_equal(close(closed), closed)


@given(masks, st.data())
def test_monotone(mask, data):
    extra = data.draw(arrays(np.uint8, mask.shape, elements=st.integers(0, 1)))
    bigger = mask | extra
    assert np.all(dilate(bigger) >= dilate(mask))
    assert np.all(erode(bigger) >= erode(mask))


def test_element_needs_origin():
    with pytest.raises(ValueError):
        StructuringElement([(1, 0)])
