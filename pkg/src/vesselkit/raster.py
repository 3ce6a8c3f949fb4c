"""Raster containers, file I/O and intensity thresholding.

Rasters are plain numpy arrays indexed ``[row, col]``; a pixel position
``(x, y)`` is ``(col, row)`` with the origin at the top-left corner.

* gray image   -- 2D ``uint8`` array, intensities in [0, 255]
* color image  -- ``(H, W, 3)`` ``uint8`` array of (R, G, B) triples
* binary mask  -- 2D ``uint8`` array holding only 0 and 1
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "ImageIOError",
    "RasterTypeError",
    "load_image",
    "save_gray",
    "save_mask",
    "green_channel",
    "to_gray",
    "threshold",
    "is_binary",
    "as_gray",
    "as_mask",
]

_READ_FORMATS = {"PNG", "PPM"}  # Pillow reports PGM/PPM both as "PPM"
_WRITE_SUFFIXES = {".png": "PNG", ".pgm": "PPM"}
_SIXTEEN_BIT_MODES = {"I;16", "I;16B", "I;16L", "I;16N", "I"}


class ImageIOError(OSError):
    """Raised when an image cannot be read or written."""

    def __init__(self, path, cause):
        self.path = str(path)
        self.cause = str(cause)
        super().__init__(f"{self.path}: {self.cause}")


class RasterTypeError(TypeError):
    """Raised when a raster does not have the expected kind (gray, color, mask)."""


def load_image(path) -> np.ndarray:
    """Read a PNG or binary PGM/PPM file.

    Returns a 2D ``uint8`` array for single-channel files and an ``(H, W, 3)``
    ``uint8`` array for color files. 16-bit samples are mapped to 8 bits by
    integer division by 257, so 0 -> 0 and 65535 -> 255 exactly.
    """
    path = Path(path)
    if not path.exists():
        raise ImageIOError(path, "no such file")
    if not path.is_file():
        raise ImageIOError(path, "not a regular file")
    try:
        with Image.open(path) as im:
            if im.format not in _READ_FORMATS:
                raise ImageIOError(path, f"unsupported format {im.format!r} (expected PNG or PGM/PPM)")
            im.load()
            return _decode(im)
    except UnidentifiedImageError as exc:
        raise ImageIOError(path, f"unrecognized or corrupt image header ({exc})") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, ImageIOError):
            raise
        raise ImageIOError(path, f"corrupt image data ({exc})") from exc


def _decode(im: Image.Image) -> np.ndarray:
    mode = im.mode
    if mode in _SIXTEEN_BIT_MODES:
        wide = np.asarray(im).astype(np.int64)
        return (np.clip(wide, 0, 65535) // 257).astype(np.uint8)
    if mode in ("L", "1", "LA"):
        return np.asarray(im.convert("L"), dtype=np.uint8).copy()
    if mode == "RGB":
        return np.asarray(im, dtype=np.uint8).copy()
    return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()


def _write(arr: np.ndarray, path) -> None:
    path = Path(path)
    fmt = _WRITE_SUFFIXES.get(path.suffix.lower())
    if fmt is None:
        raise ImageIOError(path, f"unsupported output suffix {path.suffix!r} (use .png or .pgm)")
    try:
        Image.fromarray(np.ascontiguousarray(arr)).save(path, format=fmt)
    except OSError as exc:
        raise ImageIOError(path, exc.strerror or exc) from exc


def save_gray(img, path) -> None:
    """Write a gray image as 8-bit PNG or binary PGM (chosen by suffix)."""
    _write(as_gray(img), path)


def save_mask(mask, path) -> None:
    """Write a binary mask with white pixels stored as 255."""
    _write(as_mask(mask) * np.uint8(255), path)


def green_channel(img) -> np.ndarray:
    """Return the G component of a color image as a gray image."""
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise RasterTypeError(f"expected an (H, W, 3) color image, got shape {img.shape}")
    return np.ascontiguousarray(img[:, :, 1], dtype=np.uint8)


def to_gray(img) -> np.ndarray:
    """Green channel for color inputs; gray inputs pass through unchanged."""
    img = np.asarray(img)
    if img.ndim == 2:
        return as_gray(img)
    return green_channel(img)


def threshold(img, T: int) -> np.ndarray:
    """Binary mask that is 1 where ``img > T`` (strict) and 0 elsewhere."""
    if not 0 <= T <= 255:
        raise ValueError(f"threshold must lie in [0, 255], got {T}")
    return (as_gray(img) > T).astype(np.uint8)


def is_binary(arr) -> bool:
    arr = np.asarray(arr)
    return arr.ndim == 2 and bool(np.isin(arr, (0, 1)).all())


def as_gray(img) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise RasterTypeError(f"expected a non-empty 2D gray image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise RasterTypeError("gray image intensities must lie in [0, 255]")
        img = img.astype(np.uint8)
    return img


def as_mask(mask) -> np.ndarray:
    """Validate a {0, 1} mask and return it as ``uint8``. Boolean arrays are accepted."""
    mask = np.asarray(mask)
    if mask.dtype == bool:
        mask = mask.astype(np.uint8)
    if mask.ndim != 2 or mask.size == 0:
        raise RasterTypeError(f"expected a non-empty 2D binary mask, got shape {mask.shape}")
    if not is_binary(mask):
        raise RasterTypeError("mask values must be 0 or 1")
    return mask.astype(np.uint8, copy=False)
