"""Band-limited reconstruction from sparse pixel samples.

* :func:`gp_reconstruct` -- Gerchberg-Papoulis alternating projections between
  the images that agree with the samples and the images whose DCT spectrum
  lies inside a mask.
* :func:`least_squares_oracle` -- dense least-squares fit of the in-mask
  coefficients, for small grids.
* :func:`ista_l1` -- iterative shrinkage-thresholding on the full DCT
  spectrum, the L1 baseline.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy import fft

from .errors import DataError, DimensionMismatchError, RankDeficientError, UnderdeterminedError
from .image import Image
from .masks import SampleSet, SpectralMask
from .transforms import Spectrum, dct_matrix

__all__ = [
    "GPParams",
    "ReconstructionResult",
    "gp_reconstruct",
    "least_squares_oracle",
    "in_mask_design_matrix",
    "ista_l1",
    "ista_l1_spectrum",
    "ista_objective",
    "soft_threshold",
]


@dataclass(frozen=True)
class GPParams:
    max_iters: int = 10000
    tol: float = 1e-3
    record_trace: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise DataError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol >= 0:
            raise DataError(f"tol must be >= 0, got {self.tol}")


@dataclass
class ReconstructionResult:
    image: Image
    iterations_run: int
    final_displacement: float
    converged: bool
    trace: Optional[List[float]] = None
    in_band_fraction: Optional[List[float]] = field(default=None, repr=False)

    def trace_csv(self) -> str:
        """``iteration,displacement,in_band_energy_fraction`` rows."""
        if self.trace is None:
            raise ValueError("reconstruction was run without record_trace")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "displacement", "in_band_energy_fraction"])
        for i, (d, f) in enumerate(zip(self.trace, self.in_band_fraction), start=1):
            w.writerow([i, repr(d), repr(f)])
        return buf.getvalue()


def _check_grid(samples: SampleSet, mask: SpectralMask):
    if samples.shape != mask.shape:
        raise DimensionMismatchError(
            f"samples on {samples.width}x{samples.height} but mask on {mask.width}x{mask.height}"
        )


def _rms(a):
    return float(np.sqrt(np.mean(a * a)))


def gp_reconstruct(
    samples: SampleSet,
    mask: SpectralMask,
    params: GPParams = GPParams(),
    initial: Optional[Image] = None,
) -> ReconstructionResult:
    """Alternate band-limiting and sample imposition until the iterates settle.

    One round maps the current iterate ``x`` (which always carries the known
    sample values) to ``impose(band_limit(x))``, where ``band_limit`` zeroes
    the DCT coefficients outside ``mask`` and ``impose`` overwrites the
    sampled pixels with their measured values. The displacement of a round is
    the RMS over all pixels of the change in ``x``; iteration stops once it
    is ``<= params.tol`` or after ``params.max_iters`` rounds.

    Both steps are projections onto closed convex sets, so the displacement
    never increases. ``initial`` defaults to a zero image; the known samples
    are imposed on it before the first round.
    """
    _check_grid(samples, mask)
    if initial is not None and initial.shape != samples.shape:
        raise DimensionMismatchError("initial image does not match the sample grid")

    idx = samples.flat_indices
    vals = samples.values
    keep = mask.included
    x = np.zeros(samples.shape) if initial is None else np.array(initial.pixels)
    x.ravel()[idx] = vals

    trace = [] if params.record_trace else None
    in_band = [] if params.record_trace else None
    displacement = np.inf
    converged = False
    it = 0
    for it in range(1, params.max_iters + 1):
        s = fft.dctn(x, type=2, norm="ortho")
        if in_band is not None:
            total = float(np.sum(s * s))
            in_band.append(float(np.sum(s[keep] ** 2)) / total if total > 0 else 1.0)
        s[~keep] = 0.0
        y = fft.idctn(s, type=2, norm="ortho")
        y.ravel()[idx] = vals
        displacement = _rms(y - x)
        x = y
        if trace is not None:
            trace.append(displacement)
        if displacement <= params.tol:
            converged = True
            break

    return ReconstructionResult(
        image=Image(x),
        iterations_run=it,
        final_displacement=float(displacement),
        converged=converged,
        trace=trace,
        in_band_fraction=in_band,
    )


def in_mask_design_matrix(samples: SampleSet, mask: SpectralMask) -> np.ndarray:
    """Matrix mapping in-mask coefficients to sampled pixel values.

    Entry ``[i, j]`` is the DCT basis function of the j-th included index
    ``(u, v)`` evaluated at the i-th sample position ``(x, y)``:
    ``a(u) cos(pi (2x+1) u / 2W) * a(v) cos(pi (2y+1) v / 2H)``.
    """
    _check_grid(samples, mask)
    cw = dct_matrix(samples.width)
    ch = dct_matrix(samples.height)
    uv = mask.indices()
    xs, ys = samples.positions[:, 0], samples.positions[:, 1]
    return cw[uv[:, 0][None, :], xs[:, None]] * ch[uv[:, 1][None, :], ys[:, None]]


def least_squares_oracle(
    samples: SampleSet, mask: SpectralMask, max_condition: float = 1e10
) -> Image:
    """Least-squares fit of the in-mask DCT coefficients to the samples.

    Raises :class:`UnderdeterminedError` when the mask has more indices than
    there are samples, and :class:`RankDeficientError` when the design
    matrix condition number exceeds ``max_condition``.
    """
    _check_grid(samples, mask)
    k, m = mask.count, samples.m
    if k > m:
        raise UnderdeterminedError(f"{k} unknown coefficients but only {m} samples")
    a = in_mask_design_matrix(samples, mask)
    coef, _, rank, sv = np.linalg.lstsq(a, samples.values, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    if rank < k or cond > max_condition:
        raise RankDeficientError(
            f"design matrix has rank {rank} for {k} unknowns (condition {cond:.3g})",
            rank=int(rank),
            n_unknowns=k,
            condition=cond,
        )
    spec = np.zeros(samples.shape)
    uv = mask.indices()
    spec[uv[:, 1], uv[:, 0]] = coef
    return Image(fft.idctn(spec, type=2, norm="ortho"))


def soft_threshold(z, lam):
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


def _forward(s, idx):
    return fft.idctn(s, type=2, norm="ortho").ravel()[idx]


def _adjoint(r, idx, shape):
    img = np.zeros(shape)
    img.ravel()[idx] = r
    return fft.dctn(img, type=2, norm="ortho")


def ista_objective(samples: SampleSet, spectrum: Spectrum, lam: float) -> float:
    """``0.5 * ||samples - sample_of(idct2(s))||^2 + lam * ||s||_1``."""
    r = samples.values - _forward(spectrum.coeffs, samples.flat_indices)
    return float(0.5 * np.dot(r, r) + lam * np.sum(np.abs(spectrum.coeffs)))


def ista_l1_spectrum(
    samples: SampleSet,
    lam: float,
    iters: int,
    callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
) -> Spectrum:
    """ISTA with unit step on the full DCT spectrum, starting from zero.

    The forward operator (inverse DCT followed by pixel selection) has
    spectral norm <= 1, so a unit step guarantees the objective never
    increases. ``callback(iteration, spectrum, objective)`` is called after
    every iteration.
    """
    if not lam > 0:
        raise DataError(f"lambda must be positive, got {lam}")
    if iters < 1:
        raise DataError(f"iters must be >= 1, got {iters}")
    idx = samples.flat_indices
    y = samples.values
    s = np.zeros(samples.shape)
    for it in range(1, iters + 1):
        r = y - _forward(s, idx)
        s = soft_threshold(s + _adjoint(r, idx, samples.shape), lam)
        if callback is not None:
            r = y - _forward(s, idx)
            callback(it, s, float(0.5 * np.dot(r, r) + lam * np.sum(np.abs(s))))
    return Spectrum(s)


def ista_l1(samples: SampleSet, lam: float, iters: int, callback=None) -> Image:
    """L1-regularized reconstruction; see :func:`ista_l1_spectrum`."""
    s = ista_l1_spectrum(samples, lam, iters, callback)
    return Image(fft.idctn(s.coeffs, type=2, norm="ortho"))
