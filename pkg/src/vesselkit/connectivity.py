"""Connectivity scoring of binary vessel masks.

The connectivity filter gives every white pixel the size of its connected
component, so long vessel branches score high and isolated specks score low.
The local-sensitive variant additionally lets the flood cross short gaps: when
the walk runs into background it searches the surrounding rings of pixels,
in ascending distance order, for unvisited vessel pixels, spending a
tolerance budget on every background pixel inspected. A find paints the
straight segment between the two ends as vessel and the walk carries on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _flood
from .raster import as_mask

__all__ = [
    "DistanceParams",
    "LscfParams",
    "minkowski_chebyshev_distance",
    "distance_rings",
    "ring_neighbors",
    "momentum_order",
    "flood_offsets",
    "connectivity_filter",
    "ls_connectivity_filter",
    "render_scores",
    "score_threshold",
]

_UP_CLOCKWISE_4 = ((0, -1), (1, 0), (0, 1), (-1, 0))
_UP_CLOCKWISE_8 = ((0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1))


@dataclass(frozen=True)
class DistanceParams:
    """Weights and exponent of the Minkowski-plus-Chebyshev distance."""

    w1: float = 1.0
    w2: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0 or (self.w1 == 0 and self.w2 == 0):
            raise ValueError("weights must be non-negative and not both zero")
        if self.p < 1:
            raise ValueError(f"exponent p must be >= 1, got {self.p}")


@dataclass(frozen=True)
class LscfParams:
    """Tolerance budget, ring search limit, flood connectivity and score cut-off."""

    max_score: int = 350
    max_dist: int = 4
    connectivity: int = 8
    score_threshold: int = 1

    def __post_init__(self):
        if self.max_score < 0:
            raise ValueError(f"max_score must be >= 0, got {self.max_score}")
        if self.max_dist < 1:
            raise ValueError(f"max_dist must be >= 1, got {self.max_dist}")
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.score_threshold < 0:
            raise ValueError(f"score_threshold must be >= 0, got {self.score_threshold}")


def minkowski_chebyshev_distance(a, b, params: DistanceParams = DistanceParams()) -> float:
    """``w1 * ||a - b||_p + w2 * max_i |a_i - b_i|`` for two pixel positions."""
    diffs = [abs(ai - bi) for ai, bi in zip(a, b)]
    minkowski = sum(d ** params.p for d in diffs) ** (1.0 / params.p)
    return params.w1 * minkowski + params.w2 * max(diffs, default=0)


def _clockwise_angle(dx, dy):
    # y grows downward, so "up" is (0, -1)
    return math.atan2(dx, -dy) % (2 * math.pi)


@lru_cache(maxsize=None)
def distance_rings(count: int, params: DistanceParams = DistanceParams()) -> tuple:
    """The first ``count`` rings of grid offsets, each sorted clockwise from up.

    Ring k holds every offset whose distance equals the k-th smallest distinct
    nonzero value attainable on the integer grid.
    """
    if count < 0:
        raise ValueError("ring count must be non-negative")
    if count == 0:
        return ()
    radius = 1
    while True:
        # every offset outside the window is at least this far away
        outside = minkowski_chebyshev_distance((0, 0), (radius + 1, 0), params)
        by_value: dict[float, list] = {}
        for dy in range(-radius, radius + 1):
            for dx in range(-radius, radius + 1):
                if dx == 0 and dy == 0:
                    continue
                d = round(minkowski_chebyshev_distance((0, 0), (dx, dy), params), 9)
                if d < outside:
                    by_value.setdefault(d, []).append((dx, dy))
        if len(by_value) >= count:
            values = sorted(by_value)[:count]
            return tuple(
                tuple(sorted(by_value[v], key=lambda o: _clockwise_angle(*o))) for v in values
            )
        radius += 1


def momentum_order(offsets, incoming=(0, 0)) -> list:
    """Sort offsets by alignment with the travel direction, ties clockwise from up."""
    vx, vy = incoming
    return sorted(offsets, key=lambda o: (-(o[0] * vx + o[1] * vy), _clockwise_angle(*o)))


def ring_neighbors(center, ring: int, params: DistanceParams = DistanceParams(),
                   bounds=None, incoming=(0, 0)) -> list:
    """In-bounds positions on ring ``ring`` (1-based) around ``center = (x, y)``.

    ``bounds`` is ``(width, height)``; ``incoming`` is the travel direction used
    for momentum ordering (the default yields clockwise-from-up).
    """
    if ring < 1:
        raise ValueError(f"ring index must be >= 1, got {ring}")
    cx, cy = center
    offsets = momentum_order(distance_rings(ring, params)[ring - 1], incoming)
    out = []
    for dx, dy in offsets:
        x, y = cx + dx, cy + dy
        if bounds is not None and not (0 <= x < bounds[0] and 0 <= y < bounds[1]):
            continue
        out.append((x, y))
    return out


def flood_offsets(connectivity: int) -> tuple:
    if connectivity == 4:
        return _UP_CLOCKWISE_4
    if connectivity == 8:
        return _UP_CLOCKWISE_8
    raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")


def connectivity_filter(mask, connectivity: int = 8) -> np.ndarray:
    """Score every white pixel with the pixel count of its connected component.

    Returns an ``int64`` score map; background pixels score 0.
    """
    mask = as_mask(mask)
    offs = np.array(flood_offsets(connectivity), dtype=np.int64)
    return _flood.component_sizes(np.ascontiguousarray(mask), offs[:, 0].copy(), offs[:, 1].copy())


@lru_cache(maxsize=32)
def _search_tables(connectivity: int, max_dist: int, params: DistanceParams):
    flood = flood_offsets(connectivity)
    rings = distance_rings(max(max_dist - 1, 0), params)
    cands = [(o, k + 1) for k, ring in enumerate(rings) for o in ring]
    reach = max((max(abs(o[0]), abs(o[1])) for o, _ in cands), default=0)
    radius = reach + 1
    side = 2 * radius + 1

    flood_order = np.empty((side * side, len(flood)), dtype=np.int64)
    ring_order = np.empty((side * side, len(cands)), dtype=np.int64)
    for vy in range(-radius, radius + 1):
        for vx in range(-radius, radius + 1):
            row = (vy + radius) * side + vx + radius
            flood_order[row] = [flood.index(o) for o in momentum_order(flood, (vx, vy))]
            # rings stay in ascending order; momentum sorts within a ring
            ranked = sorted(
                range(len(cands)),
                key=lambda i: (cands[i][1], -(cands[i][0][0] * vx + cands[i][0][1] * vy),
                               _clockwise_angle(*cands[i][0])),
            )
            ring_order[row] = ranked

    flood_arr = np.array(flood, dtype=np.int64)
    cand_arr = np.array([o for o, _ in cands], dtype=np.int64).reshape(-1, 2)
    cand_ring = np.array([k for _, k in cands], dtype=np.int64)
    return (flood_arr[:, 0].copy(), flood_arr[:, 1].copy(), flood_order,
            cand_arr[:, 0].copy(), cand_arr[:, 1].copy(), cand_ring, ring_order, radius)


def ls_connectivity_filter(mask, params: LscfParams = LscfParams(),
                           distance: DistanceParams = DistanceParams()):
    """Local-sensitive connectivity filter.

    Floods white pixels like :func:`connectivity_filter`. Each time the walk
    steps onto a background pixel it spends one tolerance unit and searches
    rings ``1 .. max_dist - 1`` around that pixel, in ascending distance
    order, for unvisited white pixels; every background candidate inspected
    costs another unit and the search stops once ``max_score`` units are spent.
    A find paints the Bresenham segment from the last vessel pixel to the
    found pixel white and resumes the flood there with the budget reset.
    Candidates are ordered by alignment with the travel direction.

    Returns ``(repaired, scores)``: the mask with bridges painted in, and the
    size of each merged component broadcast to its pixels.
    """
    mask = as_mask(mask)
    tables = _search_tables(params.connectivity, params.max_dist, distance)
    return _flood.local_sensitive(np.ascontiguousarray(mask), int(params.max_score),
                                  int(params.max_dist), *tables)


def render_scores(scores) -> np.ndarray:
    """Clamp scores to 255 for display as an 8-bit gray image."""
    scores = np.asarray(scores)
    if scores.ndim != 2 or (scores < 0).any():
        raise ValueError("scores must be a 2D map of non-negative integers")
    return np.minimum(scores, 255).astype(np.uint8)


def score_threshold(scores, t: int = 1) -> np.ndarray:
    """White where ``score > t``. ``t = 1`` drops isolated single pixels."""
    if t < 0:
        raise ValueError(f"score threshold must be >= 0, got {t}")
    return (np.asarray(scores) > t).astype(np.uint8)
