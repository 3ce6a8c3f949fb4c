"""Synthetic fundus-like images with known vessel masks."""
import numpy as np


def fundus(seed=0, shape=(96, 112)):
    """Return ``(color_image, vessel_truth, fov)``.

    Dark curvilinear vessels of a few calibers in the green channel on a
    bright, slightly noisy background inside a circular field of view.
    """
    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    truth = np.zeros(shape, bool)
    darkening = np.zeros(shape)
    for k in range(4):
        width = [1.2, 2.0, 3.0, 1.5][k]
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.uniform(4, 12)
        if k % 2 == 0:
            center = rng.uniform(0.25, 0.75) * w + amp * np.sin(yy / rng.uniform(10, 20) + phase)
            dist = np.abs(xx - center)
        else:
            center = rng.uniform(0.25, 0.75) * h + amp * np.sin(xx / rng.uniform(10, 20) + phase)
            dist = np.abs(yy - center)
        # short breaks along some vessels
        breaks = (np.sin((yy + xx) / 3.0 + phase) > 0.97) if k == 1 else np.zeros(shape, bool)
        profile = np.exp(-0.5 * (dist / width) ** 2) * ~breaks
        darkening = np.maximum(darkening, 55 * profile)
        truth |= dist <= width
    green = 170 - darkening + rng.normal(0, 3, shape)
    fov = (yy - h / 2) ** 2 / (0.48 * h) ** 2 + (xx - w / 2) ** 2 / (0.48 * w) ** 2 <= 1
    green = np.where(fov, green, 10)
    color = np.stack([np.clip(green + 40, 0, 255), np.clip(green, 0, 255), np.clip(green * 0.4, 0, 255)], axis=2)
    return np.round(color).astype(np.uint8), truth.astype(np.uint8), fov.astype(np.uint8)
