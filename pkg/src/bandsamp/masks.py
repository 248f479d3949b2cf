"""Random pixel sample sets and spectral support masks."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DataError, DimensionMismatchError
from .image import Image, save_pgm
from .rng import SplitMix64, sample_without_replacement

__all__ = [
    "SampleSet",
    "SpectralMask",
    "Rect",
    "Disc",
    "random_sample_set",
    "circular_lowpass_mask",
    "mask_from_regions",
    "parse_regions",
]


@dataclass(frozen=True, eq=False)
class SampleSet:
    """``M`` pixel positions ``(x, y)`` with the gray levels observed there."""

    width: int
    height: int
    positions: np.ndarray  # (M, 2) int64, columns x, y
    values: np.ndarray  # (M,) float64
    seed: int

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.int64).reshape(-1, 2)
        val = np.array(self.values, dtype=np.float64).reshape(-1)
        if len(pos) != len(val):
            raise DimensionMismatchError(f"{len(pos)} positions but {len(val)} values")
        if not 1 <= len(pos) <= self.width * self.height:
            raise DataError(f"sample count {len(pos)} outside 1..{self.width * self.height}")
        x, y = pos[:, 0], pos[:, 1]
        if np.any((x < 0) | (x >= self.width) | (y < 0) | (y >= self.height)):
            raise DataError("sample position outside the grid")
        if len(np.unique(self.flat_indices_of(pos))) != len(pos):
            raise DataError("duplicate sample positions")
        pos.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", val)

    def flat_indices_of(self, pos):
        return pos[:, 1] * self.width + pos[:, 0]

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def shape(self):
        return (self.height, self.width)

    @property
    def flat_indices(self) -> np.ndarray:
        return self.flat_indices_of(self.positions)

    def indicator(self) -> np.ndarray:
        """Boolean ``(height, width)`` array, True at sampled pixels."""
        out = np.zeros(self.width * self.height, dtype=bool)
        out[self.flat_indices] = True
        return out.reshape(self.shape)

    def render(self, background: float = 0.0) -> Image:
        """Sample map: sampled values at their positions, ``background`` elsewhere."""
        out = np.full(self.width * self.height, background, dtype=np.float64)
        out[self.flat_indices] = self.values
        return Image(out.reshape(self.shape))

    def to_text(self) -> str:
        lines = [
            "# bandsamp sample set v1",
            f"width {self.width}",
            f"height {self.height}",
            f"m {self.m}",
            f"seed {self.seed}",
        ]
        lines += [f"{x} {y} {v!r}" for (x, y), v in zip(self.positions.tolist(), self.values.tolist())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SampleSet":
        header = {}
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) == 2 and parts[0] in ("width", "height", "m", "seed"):
                header[parts[0]] = int(parts[1])
            elif len(parts) == 3:
                rows.append((int(parts[0]), int(parts[1]), float(parts[2])))
            else:
                raise DataError(f"bad sample set line: {line!r}")
        missing = {"width", "height", "m", "seed"} - header.keys()
        if missing:
            raise DataError(f"sample set header lacks {sorted(missing)}")
        if len(rows) != header["m"]:
            raise DataError(f"header says m={header['m']} but {len(rows)} samples follow")
        arr = np.array(rows, dtype=np.float64).reshape(-1, 3)
        return cls(header["width"], header["height"], arr[:, :2].astype(np.int64), arr[:, 2], header["seed"])

    def save(self, path: Union[str, os.PathLike]) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.to_text())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Union[str, os.PathLike]) -> "SampleSet":
        return cls.from_text(Path(path).read_text())


@dataclass(frozen=True, eq=False)
class SpectralMask:
    """Boolean support over DCT indices, ``included[v, u]``."""

    included: np.ndarray

    def __post_init__(self):
        a = np.array(self.included, dtype=bool)
        if a.ndim != 2:
            raise DimensionMismatchError(f"mask must be 2D, got shape {a.shape}")
        if not a.any():
            raise DataError("spectral mask includes no index")
        a.setflags(write=False)
        object.__setattr__(self, "included", a)

    @property
    def width(self) -> int:
        return self.included.shape[1]

    @property
    def height(self) -> int:
        return self.included.shape[0]

    @property
    def shape(self):
        return self.included.shape

    @property
    def count(self) -> int:
        return int(self.included.sum())

    def indices(self) -> np.ndarray:
        """Included ``(u, v)`` pairs in row-major (v, then u) order."""
        v, u = np.nonzero(self.included)
        return np.stack([u, v], axis=1)

    def issubset(self, other: "SpectralMask") -> bool:
        return self.shape == other.shape and not np.any(self.included & ~other.included)

    def __eq__(self, other):
        if not isinstance(other, SpectralMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.included, other.included))

    def to_image(self) -> Image:
        return Image(np.where(self.included, 255.0, 0.0))

    def save_pgm(self, path) -> None:
        save_pgm(self.to_image(), path)


def _check_budget(m, n):
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= n:
        raise DataError(f"budget m must be an integer in 1..{n}, got {m!r}")
    return int(m)


def random_sample_set(image: Image, m: int, seed: int) -> SampleSet:
    """Sample ``m`` distinct pixels uniformly at random.

    Positions are the first ``m`` slots of a partial Fisher-Yates shuffle of
    the flat pixel indices driven by ``SplitMix64(seed)``; identical
    ``(image, m, seed)`` give identical sample sets everywhere.
    """
    n = image.size
    m = _check_budget(m, n)
    idx = sample_without_replacement(n, m, SplitMix64(seed))
    x, y = idx % image.width, idx // image.width
    return SampleSet(
        image.width, image.height, np.stack([x, y], axis=1), image.pixels.ravel()[idx], int(seed)
    )


def _radius_sq(width, height):
    u = np.arange(width)[None, :]
    v = np.arange(height)[:, None]
    return u * u + v * v


def circular_lowpass_mask(width: int, height: int, m: int) -> SpectralMask:
    """All indices with ``u**2 + v**2 <= r2`` for the largest ``r2`` whose
    disc holds at most ``m`` indices.

    Only whole shells (sets of equal ``u**2 + v**2``) are taken, so the count
    may fall short of ``m``.
    """
    m = _check_budget(m, width * height)
    d = _radius_sq(width, height)
    shells, counts = np.unique(d, return_counts=True)
    cum = np.cumsum(counts)
    last = np.searchsorted(cum, m, side="right") - 1  # cum[0] == 1 <= m
    return SpectralMask(d <= shells[last])


@dataclass(frozen=True)
class Rect:
    """Inclusive index rectangle ``[u0..u1] x [v0..v1]``."""

    u0: int
    u1: int
    v0: int
    v1: int

    def paint(self, width, height):
        out = np.zeros((height, width), dtype=bool)
        u0, u1 = max(self.u0, 0), min(self.u1, width - 1)
        v0, v1 = max(self.v0, 0), min(self.v1, height - 1)
        if u0 <= u1 and v0 <= v1:
            out[v0 : v1 + 1, u0 : u1 + 1] = True
        return out


@dataclass(frozen=True)
class Disc:
    """Indices within Euclidean distance ``radius`` of ``(cu, cv)``."""

    cu: float
    cv: float
    radius: float

    def paint(self, width, height):
        u = np.arange(width)[None, :]
        v = np.arange(height)[:, None]
        return (u - self.cu) ** 2 + (v - self.cv) ** 2 <= self.radius**2


def mask_from_regions(width: int, height: int, regions: Iterable[Union[Rect, Disc]]) -> SpectralMask:
    """Union of rectangles and discs, clipped to the index grid."""
    regions = list(regions)
    if not regions:
        raise DataError("no regions given")
    out = np.zeros((height, width), dtype=bool)
    for r in regions:
        painted = r.paint(width, height)
        if not painted.any():
            raise DataError(f"region {r} does not intersect the {width}x{height} index grid")
        out |= painted
    return SpectralMask(out)


def parse_regions(spec: str) -> list:
    """Parse ``rect:u0,u1,v0,v1;disc:cu,cv,r;...`` into region objects."""
    regions = []
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        kind, _, args = part.partition(":")
        try:
            nums = [float(a) for a in args.split(",")]
        except ValueError:
            raise DataError(f"bad region arguments in {part!r}") from None
        if kind == "rect" and len(nums) == 4 and all(n.is_integer() for n in nums):
            regions.append(Rect(*(int(n) for n in nums)))
        elif kind == "disc" and len(nums) == 3:
            regions.append(Disc(*nums))
        else:
            raise DataError(f"bad region {part!r}; expected rect:u0,u1,v0,v1 or disc:cu,cv,r")
    return regions
