"""Deterministic synthetic test images.

The published experiments used photographs that are not distributed; these
generators stand in for them. Everything is seeded through
:class:`~bandsamp.rng.SplitMix64`.
"""

from __future__ import annotations

import numpy as np
from scipy import fft

from .errors import DataError
from .image import Image
from .rng import SplitMix64, sample_without_replacement


def natural_image(width: int = 64, height: int = 64, seed: int = 0, beta: float = 2.4) -> Image:
    """Power-law-spectrum texture with a few flat shapes, in gray levels 16..240.

    The noise amplitude falls as ``f**(-beta/2)``, which gives the
    low-frequency energy compaction typical of photographs.
    """
    rng = SplitMix64(seed)
    white = rng.normals(width * height).reshape(height, width)
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    f = np.hypot(fx, fy)
    f[0, 0] = 1.0 / max(width, height)
    tex = np.fft.ifft2(np.fft.fft2(white) * f ** (-beta / 2)).real
    tex = (tex - tex.mean()) / (tex.std() + 1e-12)

    y, x = np.mgrid[0:height, 0:width]
    shapes = np.zeros((height, width))
    for _ in range(3):
        cx, cy = rng.uniform() * width, rng.uniform() * height
        r = (0.1 + 0.2 * rng.uniform()) * min(width, height)
        shapes += (rng.uniform() - 0.5) * 2.0 * ((x - cx) ** 2 + (y - cy) ** 2 <= r * r)
    img = tex + 1.5 * shapes
    img = (img - img.min()) / (img.max() - img.min() + 1e-12)
    return Image(16.0 + 224.0 * img)


def sparse_dct_image(
    width: int,
    height: int,
    k: int,
    seed: int = 0,
    amplitude: float = 100.0,
    support=None,
    dc: float = 128.0,
) -> Image:
    """Image with exactly ``k`` nonzero DCT coefficients plus a DC level.

    Nonzero positions are drawn from ``support`` (boolean ``(height, width)``
    array, defaults to the whole grid without DC) and their magnitudes are
    uniform in ``[amplitude, 2 * amplitude)`` with random signs.
    """
    rng = SplitMix64(seed)
    if support is None:
        support = np.ones((height, width), dtype=bool)
        support[0, 0] = False
    cand = np.flatnonzero(np.asarray(support).ravel())
    if not 0 <= k <= cand.size:
        raise DataError(f"cannot place {k} coefficients in a support of {cand.size}")
    pick = cand[sample_without_replacement(cand.size, k, rng)]
    coef = np.zeros(width * height)
    mags = amplitude * (1.0 + rng.uniforms(k))
    signs = np.where(rng.uniforms(k) < 0.5, -1.0, 1.0)
    coef[pick] = mags * signs
    coef[0] += dc * np.sqrt(width * height)
    return Image(fft.idctn(coef.reshape(height, width), type=2, norm="ortho"))
