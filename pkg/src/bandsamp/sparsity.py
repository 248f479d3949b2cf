"""Top-K DCT approximation and sparsity measured at JPEG-matched fidelity.

The sparsity of an image is ``K / N``, where ``K`` is the smallest number of
largest-magnitude DCT coefficients that reconstruct the image with an RMS
error no larger than a target. By default the target is the RMS error of the
block JPEG model at quality 75.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DataError, NumericalError
from .image import Image, rmse
from .transforms import Spectrum, dct2, jpeg_model_roundtrip

__all__ = [
    "SparsityReport",
    "coefficient_ranking",
    "topk_approximation",
    "topk_rmse_curve",
    "jpeg_target_rmse",
    "sparsity_at_target",
    "DEFAULT_QUALITY",
]

DEFAULT_QUALITY = 75

REPORT_FIELDS = (
    "n_total",
    "k_required",
    "sparsity",
    "target_rmse",
    "achieved_rmse",
    "jpeg_quality_used",
)


@dataclass(frozen=True)
class SparsityReport:
    n_total: int
    k_required: int
    sparsity: float
    target_rmse: float
    achieved_rmse: float
    jpeg_quality_used: Optional[int]

    def to_dict(self):
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    def csv_row(self):
        return [_fmt(getattr(self, f)) for f in REPORT_FIELDS]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def coefficient_ranking(spectrum: Spectrum) -> np.ndarray:
    """Flat indices ordered by decreasing ``|coeff|``.

    Ties keep ascending flat index ``v * width + u`` (stable sort).
    """
    flat = spectrum.coeffs.ravel()
    return np.argsort(-np.abs(flat), kind="stable")


def topk_approximation(spectrum: Spectrum, k: int) -> Spectrum:
    """Keep the ``k`` largest-magnitude coefficients and zero the rest."""
    n = spectrum.size
    if not 0 <= k <= n:
        raise DataError(f"k must be in 0..{n}, got {k}")
    order = coefficient_ranking(spectrum)
    flat = spectrum.coeffs.ravel()
    out = np.zeros_like(flat)
    keep = order[:k]
    out[keep] = flat[keep]
    return Spectrum(out.reshape(spectrum.shape))


def topk_rmse_curve(spectrum: Spectrum) -> np.ndarray:
    """RMS reconstruction error of the top-k approximation for k = 0..N.

    Uses Parseval: the error energy equals the energy of the dropped
    coefficients. Tail sums are accumulated from the smallest coefficient up,
    so the k = N entry is exactly zero.
    """
    flat = spectrum.coeffs.ravel()
    sq = np.sort(flat * flat)  # ascending
    tail = np.concatenate((np.cumsum(sq)[::-1], [0.0]))
    return np.sqrt(tail / flat.size)


def jpeg_target_rmse(image: Image, quality: int = DEFAULT_QUALITY) -> float:
    """RMS error of the block JPEG model against the original image."""
    return rmse(image, jpeg_model_roundtrip(image, quality))


def sparsity_at_target(
    image: Image,
    target_rmse: Optional[float] = None,
    *,
    quality: int = DEFAULT_QUALITY,
    slack: float = 1e-9,
) -> SparsityReport:
    """Smallest ``k >= 1`` whose top-k reconstruction error is within target.

    With ``target_rmse=None`` the target is :func:`jpeg_target_rmse` at
    ``quality``. ``slack`` absorbs floating-point residue so that exactly
    sparse images report their true ``k`` at target zero.
    """
    quality_used = None
    if target_rmse is None:
        target_rmse = jpeg_target_rmse(image, quality)
        quality_used = quality
    if not target_rmse >= 0:
        raise DataError(f"target RMSE must be non-negative, got {target_rmse}")
    curve = topk_rmse_curve(dct2(image))
    n = image.size
    threshold = target_rmse + slack
    if curve[n] > threshold:
        raise NumericalError(
            f"target {target_rmse} unreachable, error floor is {curve[n]}"
        )
    # curve is non-increasing: binary search for the first k in 1..n under threshold
    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if curve[mid] <= threshold:
            hi = mid
        else:
            lo = mid + 1
    return SparsityReport(
        n_total=n,
        k_required=lo,
        sparsity=lo / n,
        target_rmse=float(target_rmse),
        achieved_rmse=float(curve[lo]),
        jpeg_quality_used=quality_used,
    )
