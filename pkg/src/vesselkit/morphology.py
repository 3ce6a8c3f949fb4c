"""Binary dilation, erosion and closing. Pixels outside the image read as background."""
from __future__ import annotations

import numpy as np

from .raster import as_mask

__all__ = ["CROSS", "StructuringElement", "dilate", "erode", "close", "complement"]


class StructuringElement(frozenset):
    """Finite set of ``(dx, dy)`` offsets containing the origin."""

    def __new__(cls, offsets):
        offsets = frozenset((int(dx), int(dy)) for dx, dy in offsets)
        if (0, 0) not in offsets:
            raise ValueError("structuring element must contain the origin")
        return super().__new__(cls, offsets)

    def reflected(self) -> "StructuringElement":
        return StructuringElement((-dx, -dy) for dx, dy in self)


CROSS = StructuringElement([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])


def _shifted(mask: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """``out[y, x] = mask[y + dy, x + dx]`` with zeros outside the image."""
    h, w = mask.shape
    out = np.zeros_like(mask)
    if abs(dx) >= w or abs(dy) >= h:
        return out
    out[max(0, -dy):h - max(0, dy), max(0, -dx):w - max(0, dx)] = \
        mask[max(0, dy):h - max(0, -dy), max(0, dx):w - max(0, -dx)]
    return out


def dilate(mask, se: StructuringElement = CROSS) -> np.ndarray:
    """White where some offset ``o`` in ``se`` has ``mask(p - o)`` white."""
    mask = as_mask(mask)
    out = np.zeros_like(mask)
    for dx, dy in se:
        out |= _shifted(mask, -dx, -dy)
    return out


def erode(mask, se: StructuringElement = CROSS) -> np.ndarray:
    """White where ``mask(p + o)`` is white for every offset ``o`` in ``se``."""
    mask = as_mask(mask)
    out = np.ones_like(mask)
    for dx, dy in se:
        out &= _shifted(mask, dx, dy)
    return out


def close(mask, se: StructuringElement = CROSS, dilations: int = 1, erosions: int = 1) -> np.ndarray:
    """Dilate ``dilations`` times, then erode ``erosions`` times (one each by default).

    The composition runs on a zero-padded canvas wide enough that nothing
    dilated past the image edge is lost before the erosion reads it back;
    the result is cropped to the input size. This keeps closing extensive
    and idempotent up to the border.
    """
    if dilations < 0 or erosions < 0:
        raise ValueError("operation counts must be non-negative")
    mask = as_mask(mask)
    reach = max(max(abs(dx), abs(dy)) for dx, dy in se)
    pad = reach * max(dilations, erosions)
    out = np.pad(mask, pad) if pad else mask
    for _ in range(dilations):
        out = dilate(out, se)
    for _ in range(erosions):
        out = erode(out, se)
    h, w = mask.shape
    return np.ascontiguousarray(out[pad:pad + h, pad:pad + w])


def complement(mask) -> np.ndarray:
    return (1 - as_mask(mask)).astype(np.uint8)
