"""Orthonormal 2D DCT-II and the 8x8 block-DCT JPEG quantization model.

The 1D kernel is

    X(u) = a(u) * sum_m x(m) * cos(pi * (2m + 1) * u / (2L)),
    a(0) = sqrt(1/L),  a(u > 0) = sqrt(2/L)

applied along rows, then columns. Spectra are indexed ``coeffs[v, u]`` with
``u`` the horizontal and ``v`` the vertical frequency index, DC at ``[0, 0]``.

For 8x8 blocks the baseline JPEG FDCT, ``F(u,v) = 1/4 C(u) C(v) sum ...`` with
``C(0) = 1/sqrt(2)``, equals this orthonormal transform exactly (both give
``sqrt(1/8) * sqrt(2/8) = 1/(4 sqrt 2)`` on mixed DC/AC terms and ``1/4`` on
AC/AC terms), so the quantization tables apply without any rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import DataError, DimensionMismatchError
from .image import Image, round_half_away

__all__ = [
    "Spectrum",
    "dct2",
    "idct2",
    "dct2_direct",
    "dct_matrix",
    "STD_LUMINANCE_TABLE",
    "quality_table",
    "jpeg_model_roundtrip",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """DCT coefficients aligned with an image grid, shape ``(height, width)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionMismatchError(f"spectrum must be a non-empty 2D array, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def width(self) -> int:
        return self.coeffs.shape[1]

    @property
    def height(self) -> int:
        return self.coeffs.shape[0]

    @property
    def shape(self):
        return self.coeffs.shape

    @property
    def size(self) -> int:
        return self.coeffs.size

    def energy(self) -> float:
        return float(np.sum(self.coeffs * self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"Spectrum(width={self.width}, height={self.height})"


def dct2(image: Image) -> Spectrum:
    """Orthonormal 2D DCT-II (fast path)."""
    return Spectrum(fft.dctn(image.pixels, type=2, norm="ortho"))


def idct2(spectrum: Spectrum) -> Image:
    """Inverse of :func:`dct2`."""
    return Image(fft.idctn(spectrum.coeffs, type=2, norm="ortho"))


def dct_matrix(n: int) -> np.ndarray:
    """``C[u, m] = a(u) cos(pi (2m+1) u / 2n)``; rows are the 1D basis vectors."""
    u = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * m + 1) * u / (2 * n))
    a = np.full(n, np.sqrt(2.0 / n))
    a[0] = np.sqrt(1.0 / n)
    return a[:, None] * c


def dct2_direct(image: Image) -> Spectrum:
    """Same transform as :func:`dct2`, evaluated as the literal double sum.

    O(N^2) in the pixel count; meant as a test oracle for small images.
    """
    h, w = image.shape
    cw = dct_matrix(w)  # [u, x]
    ch = dct_matrix(h)  # [v, y]
    # basis[v, u, y, x] = ch[v, y] * cw[u, x]
    basis = ch[:, None, :, None] * cw[None, :, None, :]
    return Spectrum(np.einsum("vuyx,yx->vu", basis, image.pixels))


# ------------------------------------------------------------- JPEG model

STD_LUMINANCE_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)
STD_LUMINANCE_TABLE.setflags(write=False)


def _check_quality(quality):
    if isinstance(quality, bool) or int(quality) != quality or not 1 <= quality <= 100:
        raise DataError(f"JPEG quality must be an integer in 1..100, got {quality!r}")
    return int(quality)


def quality_table(quality: int) -> np.ndarray:
    """Standard luminance table scaled with the IJG quality rule."""
    quality = _check_quality(quality)
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    q = (STD_LUMINANCE_TABLE * scale + 50) // 100
    return np.clip(q, 1, 255)


def jpeg_model_roundtrip(image: Image, quality: int = 75) -> Image:
    """Quantize and dequantize every 8x8 block of ``image``.

    Blocks are level shifted by -128, transformed with the orthonormal DCT,
    divided by the quality-scaled table, rounded (half away from zero),
    multiplied back and inverted. Images whose sides are not multiples of 8
    are edge-replicated up to the next multiple and cropped afterwards. The
    output is neither rounded nor clamped to 8 bits.
    """
    q = quality_table(quality).astype(np.float64)
    h, w = image.shape
    ph, pw = -h % 8, -w % 8
    x = np.pad(image.pixels, ((0, ph), (0, pw)), mode="edge") - 128.0
    bh, bw = x.shape[0] // 8, x.shape[1] // 8
    # (bh, 8, bw, 8) -> (bh, bw, 8, 8)
    blocks = x.reshape(bh, 8, bw, 8).transpose(0, 2, 1, 3)
    coef = fft.dctn(blocks, type=2, norm="ortho", axes=(2, 3))
    coef = round_half_away(coef / q) * q
    rec = fft.idctn(coef, type=2, norm="ortho", axes=(2, 3))
    rec = rec.transpose(0, 2, 1, 3).reshape(bh * 8, bw * 8) + 128.0
    return Image(rec[:h, :w])
