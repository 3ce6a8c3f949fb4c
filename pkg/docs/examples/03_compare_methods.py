"""All four post-processing methods on a synthetic fundus image.

The image is built here with a known vessel map so that every method can be
scored against it: thresholded vesselness alone, the connectivity filter,
the connectivity filter followed by a closing, and the local-sensitive filter.
"""
import numpy as np

from vesselkit import PipelineConfig, confusion, rates, segment


def synthetic_fundus(seed, shape=(128, 144)):
    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    truth = np.zeros(shape, bool)
    dark = np.zeros(shape)
    for k, width in enumerate([1.2, 2.0, 3.0, 1.5]):
        phase, amp = rng.uniform(0, 2 * np.pi), rng.uniform(4, 12)
        if k % 2 == 0:
            dist = np.abs(xx - rng.uniform(0.25, 0.75) * w - amp * np.sin(yy / 15 + phase))
        else:
            dist = np.abs(yy - rng.uniform(0.25, 0.75) * h - amp * np.sin(xx / 15 + phase))
        gaps = (np.sin((xx + yy) / 3 + phase) > 0.97) & (k == 1)
        dark = np.maximum(dark, 55 * np.exp(-0.5 * (dist / width) ** 2) * ~gaps)
        truth |= dist <= width
    fov = ((yy - h / 2) / (0.48 * h)) ** 2 + ((xx - w / 2) / (0.48 * w)) ** 2 <= 1
    # No black surround outside the FOV: its rim reads as one huge dark vessel
    # and would own the top of the 0..255 rescale.
    green = 170 - dark + rng.normal(0, 3, shape)
    color = np.stack([green + 40, green, 0.4 * green], axis=2)
    return np.clip(np.round(color), 0, 255).astype(np.uint8), truth, fov


color, truth, fov = synthetic_fundus(seed=0)
print(f"{'method':12} {'TP%':>6} {'TN%':>6} {'ACC%':>6} {'white px':>9}")
for method in ("frangi-only", "cf", "cf+close", "lscf"):
    seg = segment(color, PipelineConfig(method=method))
    r = rates(confusion(seg.mask, truth, fov))
    print(f"{method:12} {r.tp_rate:6.2f} {r.tn_rate:6.2f} {r.accuracy:6.2f} {int(seg.mask.sum()):9d}")
