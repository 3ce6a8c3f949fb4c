import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import component_size_oracle, distance_values, random_mask
from vesselkit.connectivity import (
    DistanceParams,
    LscfParams,
    connectivity_filter,
    distance_rings,
    ls_connectivity_filter,
    momentum_order,
    render_scores,
    ring_neighbors,
    minkowski_chebyshev_distance,
    score_threshold,
)

masks = arrays(np.uint8, st.tuples(st.integers(1, 14), st.integers(1, 14)), elements=st.integers(0, 1))


def two_segments(gap, height=5, width=30, length=10, start=2, row=2):
    mask = np.zeros((height, width), np.uint8)
    mask[row, start:start + length] = 1
    mask[row, start + length + gap:start + 2 * length + gap] = 1
    return mask


# --- distance and rings -------------------------------------------------------------

@pytest.mark.parametrize("a, b, expected", [((0, 0), (0, 0), 0), ((0, 0), (1, 0), 2), ((0, 0), (1, 1), 3),
                                            ((2, 5), (-1, 1), 7 + 4)])
def test_distance_examples(a, b, expected):
    assert minkowski_chebyshev_distance(a, b) == expected


def test_distance_general_params():
    params = DistanceParams(w1=2.0, w2=0.5, p=2.0)
    assert minkowski_chebyshev_distance((0, 0), (3, 4), params) == pytest.approx(2 * 5 + 0.5 * 4)


coords = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@given(coords, coords)
def test_distance_symmetric_and_definite(a, b):
    assert minkowski_chebyshev_distance(a, b) == minkowski_chebyshev_distance(b, a)
    assert (minkowski_chebyshev_distance(a, b) == 0) == (a == b)


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 5), st.integers(0, 5))
def test_distance_monotone_in_widening(dx, dy, ex, ey):
    assert minkowski_chebyshev_distance((0, 0), (dx + ex, dy + ey)) >= minkowski_chebyshev_distance((0, 0), (dx, dy))


def test_rings_match_window_enumeration():
    values = distance_values(half=4)
    rings = distance_rings(6)
    # values up to the first one reachable outside the window are complete
    for (value, offsets), ring in zip(values[:6], rings):
        assert set(ring) == offsets
    assert values[0][0] == 2 and values[1][0] == 3


def test_rings_with_other_weights():
    params = DistanceParams(w1=1.0, w2=0.0, p=2.0)  # plain Euclidean
    values = distance_values(1.0, 0.0, 2.0, half=5)
    for (value, offsets), ring in zip(values[:5], distance_rings(5, params)):
        assert set(ring) == offsets


def test_ring_neighbors_examples():
    assert ring_neighbors((5, 5), 1) == [(5, 4), (6, 5), (5, 6), (4, 5)]
    assert ring_neighbors((5, 5), 2) == [(6, 4), (6, 6), (4, 6), (4, 4)]
    assert ring_neighbors((0, 0), 1, bounds=(10, 10)) == [(1, 0), (0, 1)]
    with pytest.raises(ValueError):
        ring_neighbors((0, 0), 0)


def test_momentum_order_prefers_travel_direction():
    ring1 = distance_rings(1)[0]
    assert momentum_order(ring1, (0, 1))[0] == (0, 1)
    assert momentum_order(ring1, (-1, 0)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert momentum_order(ring1) == list(ring1)


# --- connectivity filter -------------------------------------------------------------

def test_cf_all_black():
    assert not connectivity_filter(np.zeros((6, 7), np.uint8)).any()


@pytest.mark.parametrize("connectivity", [4, 8])
def test_cf_plus_shape(connectivity):
    mask = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], np.uint8)
    assert np.array_equal(connectivity_filter(mask, connectivity), mask * 5)


def test_cf_diagonal_connectivity():
    mask = np.eye(4, dtype=np.uint8)
    assert np.array_equal(connectivity_filter(mask, 8), mask * 4)
    assert np.array_equal(connectivity_filter(mask, 4), mask)


def test_cf_bigger_component_is_brighter():
    mask = np.zeros((30, 30), np.uint8)
    mask[2:12, 2:12] = 1  # 100 pixels
    mask[20, 5:15] = 1  # 10 pixels
    scores = connectivity_filter(mask)
    assert scores[5, 5] == 100 and scores[20, 7] == 10
    assert render_scores(scores)[5, 5] > render_scores(scores)[20, 7]


@settings(max_examples=150, deadline=None)
@given(masks, st.sampled_from([4, 8]))
def test_cf_matches_union_find(mask, connectivity):
    assert np.array_equal(connectivity_filter(mask, connectivity), component_size_oracle(mask, connectivity))


def test_cf_rejects_non_binary():
    with pytest.raises(TypeError):
        connectivity_filter(np.array([[0, 2]], np.uint8))


# --- render and score threshold -------------------------------------------------------

def test_render_scores():
    scores = np.array([[0, 5, 10000]])
    assert render_scores(scores).tolist() == [[0, 5, 255]]
    assert render_scores(scores).dtype == np.uint8


def test_score_threshold_examples():
    mask = np.zeros((5, 5), np.uint8)
    mask[0, 0] = 1
    mask[3, 2:4] = 1
    scores = connectivity_filter(mask)
    assert np.array_equal(score_threshold(scores, 0), mask)
    kept = score_threshold(scores, 1)
    assert kept[0, 0] == 0 and kept[3, 2] == kept[3, 3] == 1
    assert not score_threshold(scores, int(scores.max())).any()


@settings(max_examples=100, deadline=None)
@given(masks, st.integers(0, 20), st.integers(0, 20))
def test_score_threshold_monotone(mask, t1, t2):
    scores = connectivity_filter(mask)
    lo, hi = sorted((t1, t2))
    assert np.all(score_threshold(scores, hi) <= score_threshold(scores, lo))


# --- local-sensitive connectivity filter ---------------------------------------------

def test_lscf_bridges_two_pixel_gap():
    mask = two_segments(gap=2)
    repaired, scores = ls_connectivity_filter(mask, LscfParams(max_score=350, max_dist=4))
    expected = mask.copy()
    expected[2, 12:14] = 1
    assert np.array_equal(repaired, expected)
    assert np.array_equal(scores, expected * 22)


@pytest.mark.parametrize("connectivity", [4, 8])
def test_lscf_gap_without_reach(connectivity):
    mask = two_segments(gap=2)
    repaired, scores = ls_connectivity_filter(mask, LscfParams(max_score=0, max_dist=1, connectivity=connectivity))
    assert np.array_equal(repaired, mask)
    assert np.array_equal(scores, mask * 10)


def test_lscf_budget_boundary():
    # From the gap pixel next to the left segment, travelling right, the search
    # inspects: gap entry (1), ring 1 right/up/down (3), ring 2 diagonals (4);
    # the far segment is the first ring-3 candidate. So 9 units are needed.
    mask = two_segments(gap=2)
    _, short = ls_connectivity_filter(mask, LscfParams(max_score=8, max_dist=4))
    _, enough = ls_connectivity_filter(mask, LscfParams(max_score=9, max_dist=4))
    assert short.max() == 10
    assert enough.max() == 22


def test_lscf_reach_grows_with_max_dist():
    # a 3 px gap puts the far segment 3 steps from the first gap pixel: distance 6, ring 5
    mask = two_segments(gap=3, width=40)
    _, near = ls_connectivity_filter(mask, LscfParams(max_dist=4))
    _, far = ls_connectivity_filter(mask, LscfParams(max_dist=8))
    assert near.max() == 10
    assert far.max() == 23


def test_lscf_diagonal_bridge_uses_straight_segment():
    mask = np.zeros((12, 12), np.uint8)
    for i in range(4):
        mask[i, i] = 1
        mask[i + 6, i + 6] = 1
    repaired, scores = ls_connectivity_filter(mask, LscfParams(max_dist=8))
    assert np.array_equal(np.diag(repaired)[:10], np.ones(10))
    assert repaired.sum() == 10
    assert scores.max() == 10


def test_lscf_isolated_pixels_stay_apart_beyond_reach():
    mask = np.zeros((9, 9), np.uint8)
    mask[0, 0] = mask[8, 8] = 1
    repaired, scores = ls_connectivity_filter(mask)
    assert np.array_equal(repaired, mask)
    assert np.array_equal(scores, mask)


@settings(max_examples=100, deadline=None)
@given(masks, st.sampled_from([4, 8]))
def test_lscf_zero_budget_is_cf(mask, connectivity):
    repaired, scores = ls_connectivity_filter(mask, LscfParams(max_score=0, connectivity=connectivity))
    assert np.array_equal(repaired, mask)
    assert np.array_equal(scores, connectivity_filter(mask, connectivity))


@settings(max_examples=100, deadline=None)
@given(masks, st.integers(1, 6), st.integers(0, 60))
def test_lscf_extensive_and_consistent(mask, max_dist, max_score):
    params = LscfParams(max_score=max_score, max_dist=max_dist)
    repaired, scores = ls_connectivity_filter(mask, params)
    assert np.all(repaired >= mask)
    assert np.array_equal(scores > 0, repaired == 1)
    white = mask == 1
    assert np.all(scores[white] >= connectivity_filter(mask)[white])


def test_lscf_deterministic(rng):
    mask = random_mask(rng, (80, 80), 0.3)
    a = ls_connectivity_filter(mask)
    b = ls_connectivity_filter(mask.copy())
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_lscf_rejoins_dashed_line():
    mask = np.zeros((20, 60), np.uint8)
    mask[10, 2:58] = 1
    mask[10, 8::9] = 0
    assert connectivity_filter(mask).max() < 10
    repaired, scores = ls_connectivity_filter(mask)
    assert repaired[10, 2:58].all()
    assert scores[10, 2] == 56


def test_params_validation():
    with pytest.raises(ValueError):
        LscfParams(max_score=-1)
    with pytest.raises(ValueError):
        LscfParams(max_dist=0)
    with pytest.raises(ValueError):
        LscfParams(connectivity=6)
    with pytest.raises(ValueError):
        DistanceParams(w1=0, w2=0)
    with pytest.raises(ValueError):
        DistanceParams(p=0.5)
