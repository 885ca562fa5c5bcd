"""Synthetic test images with controlled maxima.

``four_bumps`` places four Gaussian bumps whose amplitude ordering is the
reverse of their integrated-mass ordering, so height-based and volume-based
importance measures select different pairs.  ``two_ridges`` builds one bright
elongated ridge broken by a gap, giving two maxima whose reconnection is easy
to quantify.  Noise is additive uniform in [-amplitude, +amplitude].
"""

from __future__ import annotations

import numpy as np

from .grid import Connectivity
from .imageio import Image

# (row, col, sigma, amplitude): amplitudes decrease where masses increase
DEFAULT_BUMPS = (
    (16.0, 16.0, 2.8, 1.0),
    (16.0, 48.0, 5.0, 0.62),
    (48.0, 16.0, 4.0, 0.8),
    (48.0, 48.0, 6.0, 0.5),
)


def _noise(shape, amplitude: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-amplitude, amplitude, size=shape)


def four_bumps(
    width: int = 64,
    height: int = 64,
    bumps=DEFAULT_BUMPS,
    noise: float = 0.02,
    seed: int = 0,
    connectivity: Connectivity = Connectivity.CONN8,
) -> Image:
    """Sum of isotropic Gaussian bumps plus uniform noise."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    m = np.zeros((height, width))
    for cy, cx, sigma, amp in bumps:
        m += amp * np.exp(-((ys - cy) ** 2 + (xs - cx) ** 2) / (2.0 * sigma**2))
    if noise > 0:
        m = m + _noise(m.shape, noise, seed)
    return Image.from_matrix(m, connectivity)


def two_ridges(
    width: int = 48,
    height: int = 24,
    gap_x: int | None = None,
    noise: float = 0.0,
    seed: int = 0,
    connectivity: Connectivity = Connectivity.CONN8,
) -> Image:
    """One horizontal ridge broken at ``gap_x`` into two unequal segments.

    The two segments peak at different heights (0.9 and ~0.83) so their merge
    point in the gap — not the image border — is the saddle of the weaker
    maximum.  Without noise the image has exactly two regional maxima.
    """
    if gap_x is None:
        gap_x = width // 2
    if not 0 < gap_x < width - 1:
        raise ValueError(f"gap_x must lie strictly inside the width, got {gap_x}")
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    # integer crest row/columns so each ridge top is a single pixel
    cy = float(height // 2)
    sigma_x = width / 7.0
    sigma_y = height / 7.0
    q1 = float(gap_x // 2)
    q2 = float((gap_x + width) // 2)
    crest = np.exp(-((xs - q1) ** 2) / (2.0 * sigma_x**2))
    crest += 0.92 * np.exp(-((xs - q2) ** 2) / (2.0 * sigma_x**2))
    m = 0.9 * crest * np.exp(-((ys - cy) ** 2) / (2.0 * sigma_y**2))
    if noise > 0:
        m = m + _noise(m.shape, noise, seed)
    return Image.from_matrix(m, connectivity)


GENERATORS = {"four_bumps": four_bumps, "two_ridges": two_ridges}
