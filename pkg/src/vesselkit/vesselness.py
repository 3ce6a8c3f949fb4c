"""Multiscale Hessian-eigenvalue vesselness (Frangi filter) for 2D images."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.ndimage import convolve1d

from .raster import as_gray

__all__ = [
    "DARK_ON_BRIGHT",
    "BRIGHT_ON_DARK",
    "FrangiParams",
    "HessianField",
    "gaussian_kernels",
    "hessian_at_scale",
    "eigenvalues_sym2x2",
    "vesselness_at_scale",
    "frangi_response",
    "frangi_multiscale",
    "rescale_to_255",
]

DARK_ON_BRIGHT = "dark-on-bright"
BRIGHT_ON_DARK = "bright-on-dark"
POLARITIES = (DARK_ON_BRIGHT, BRIGHT_ON_DARK)


@dataclass(frozen=True)
class FrangiParams:
    """Scale range and response-shape constants of the vesselness filter.

    ``beta`` controls the sensitivity to blob-like structures and ``c`` the
    sensitivity to overall second-order structure (in intensity units).
    """

    sigma_min: float = 1.0
    sigma_max: float = 8.0
    sigma_step: float = 1.0
    beta: float = 0.5
    c: float = 15.0
    polarity: str = DARK_ON_BRIGHT

    def __post_init__(self):
        if not 0 < self.sigma_min <= self.sigma_max:
            raise ValueError(f"need 0 < sigma_min <= sigma_max, got {self.sigma_min}, {self.sigma_max}")
        if self.sigma_step <= 0:
            raise ValueError(f"sigma_step must be positive, got {self.sigma_step}")
        if self.beta <= 0 or self.c <= 0:
            raise ValueError("beta and c must be positive")
        if self.polarity not in POLARITIES:
            raise ValueError(f"polarity must be one of {POLARITIES}, got {self.polarity!r}")

    def sigmas(self) -> list[float]:
        count = int(math.floor((self.sigma_max - self.sigma_min) / self.sigma_step + 1e-9)) + 1
        return [self.sigma_min + i * self.sigma_step for i in range(count)]


class HessianField(NamedTuple):
    dxx: np.ndarray
    dxy: np.ndarray
    dyy: np.ndarray


def gaussian_kernels(sigma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sampled Gaussian, first and second derivative kernels on ``[-r, r]``, ``r = ceil(4 sigma)``.

    The smoothing kernel sums to one. The derivative kernels are corrected so
    that convolution differentiates linear (first) and quadratic (second)
    sequences exactly, and the second derivative kernel has zero sum.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(4.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / sigma) ** 2)
    g /= g.sum()
    d1 = -x / sigma**2 * g
    d1 /= -np.sum(x * d1)
    d2 = (x**2 / sigma**4 - 1.0 / sigma**2) * g
    d2 -= d2.mean()
    d2 /= 0.5 * np.sum(x**2 * d2)
    return g, d1, d2


def hessian_at_scale(img, sigma: float) -> HessianField:
    """Scale-normalized (times sigma**2) Gaussian second derivatives of ``img``.

    Separable convolutions with edge replication at the border. Axis 1 is x
    (columns), axis 0 is y (rows).
    """
    g, d1, d2 = gaussian_kernels(sigma)
    data = np.asarray(img)
    if data.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {data.shape}")
    # integer offset keeps img and img + k bit-identical after the shift
    if np.issubdtype(data.dtype, np.integer):
        data = (data.astype(np.int64) - int(data.min())).astype(np.float64)
    else:
        data = data.astype(np.float64)

    def sep(kx, ky):
        tmp = convolve1d(data, kx, axis=1, mode="nearest")
        return convolve1d(tmp, ky, axis=0, mode="nearest")

    s2 = sigma * sigma
    return HessianField(dxx=s2 * sep(d2, g), dxy=s2 * sep(d1, d1), dyy=s2 * sep(g, d2))


def eigenvalues_sym2x2(dxx, dxy, dyy):
    """Eigenvalues of ``[[dxx, dxy], [dxy, dyy]]`` ordered so ``|l1| <= |l2|``.

    Works elementwise on arrays. When the magnitudes tie, ``l1 >= l2``.
    """
    dxx = np.asarray(dxx, dtype=np.float64)
    dxy = np.asarray(dxy, dtype=np.float64)
    dyy = np.asarray(dyy, dtype=np.float64)
    trace = dxx + dyy
    disc = np.hypot(dxx - dyy, 2.0 * dxy)
    # larger-magnitude root first; the other from det / root avoids cancellation
    big = 0.5 * (trace + np.copysign(disc, trace))
    det = dxx * dyy - dxy * dxy
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0.0, det / np.where(big != 0.0, big, 1.0), 0.0)
    swap = (np.abs(small) > np.abs(big)) | ((np.abs(small) == np.abs(big)) & (small < big))
    l1 = np.where(swap, big, small)
    l2 = np.where(swap, small, big)
    if l1.ndim == 0:
        return float(l1), float(l2)
    return l1, l2


def vesselness_at_scale(field: HessianField, beta: float = 0.5, c: float = 15.0,
                        polarity: str = DARK_ON_BRIGHT) -> np.ndarray:
    """Per-pixel Frangi vesselness in [0, 1] from one Hessian field."""
    if polarity not in POLARITIES:
        raise ValueError(f"polarity must be one of {POLARITIES}, got {polarity!r}")
    l1, l2 = eigenvalues_sym2x2(field.dxx, field.dxy, field.dyy)
    l1 = np.atleast_1d(l1)
    l2 = np.atleast_1d(l2)
    if polarity == DARK_ON_BRIGHT:
        valid = l2 > 0
    else:
        valid = l2 < 0
    safe_l2 = np.where(valid, l2, 1.0)
    blob = (l1 / safe_l2) ** 2
    structure = l1 * l1 + l2 * l2
    v = np.exp(-blob / (2.0 * beta * beta)) * (1.0 - np.exp(-structure / (2.0 * c * c)))
    return np.where(valid, v, 0.0).reshape(np.shape(field.dxx))


def frangi_response(img, params: FrangiParams | None = None) -> np.ndarray:
    """Pixelwise maximum of the vesselness over all scales (real-valued, in [0, 1])."""
    params = params or FrangiParams()
    sigmas = params.sigmas()
    if not sigmas:
        raise ValueError("empty scale set")
    img = as_gray(img)
    best = np.zeros(img.shape, dtype=np.float64)
    for sigma in sigmas:
        v = vesselness_at_scale(hessian_at_scale(img, sigma), params.beta, params.c, params.polarity)
        np.maximum(best, v, out=best)
    return best


def rescale_to_255(response: np.ndarray) -> np.ndarray:
    """Map the maximum of a non-negative map to 255, rounding half up; zeros stay zero."""
    top = float(response.max()) if response.size else 0.0
    if top <= 0.0:
        return np.zeros(response.shape, dtype=np.uint8)
    scaled = np.floor(response * (255.0 / top) + 0.5)
    return np.clip(scaled, 0, 255).astype(np.uint8)


def frangi_multiscale(img, params: FrangiParams | None = None) -> np.ndarray:
    """Multiscale vesselness rendered as an 8-bit gray image."""
    return rescale_to_255(frangi_response(img, params))
