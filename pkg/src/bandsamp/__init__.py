"""Random sampling, band-limited reconstruction and sparse-sampling bounds."""

from .bounds import (
    BoundPoint,
    cs_bound_sparsity,
    fit_drf,
    fixtures,
    invert_cs_bound,
    redundancy_ratio,
    theoretical_drf,
)
from .errors import (
    AliasingError,
    BandsampError,
    DataError,
    DimensionMismatchError,
    NumericalError,
    PGMError,
    RankDeficientError,
    UnderdeterminedError,
)
from .image import Image, load_pgm, rmse, save_pgm
from .masks import (
    Disc,
    Rect,
    SampleSet,
    SpectralMask,
    circular_lowpass_mask,
    mask_from_regions,
    random_sample_set,
)
from .reconstruct import (
    GPParams,
    ReconstructionResult,
    gp_reconstruct,
    ista_l1,
    least_squares_oracle,
)
from .sparsity import SparsityReport, jpeg_target_rmse, sparsity_at_target, topk_approximation
from .subband import BandSet, Signal1D, make_multiband, subband_reconstruct, subband_sample
from .transforms import Spectrum, dct2, dct2_direct, idct2, jpeg_model_roundtrip

__version__ = "0.1.0"
