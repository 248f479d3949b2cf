"""Grayscale image container, RMS error metric and PGM file I/O.

Pixels are kept as float64 gray levels from load to save; quantization to
8 bits happens only in :func:`save_pgm`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    PGMHeaderError,
    PGMMaxvalError,
    PGMTruncatedError,
)

__all__ = ["Image", "load_pgm", "save_pgm", "rmse", "round_half_away"]

PathLike = Union[str, os.PathLike]


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Image:
    """Real-valued grayscale raster.

    ``pixels`` has shape ``(height, width)``; row-major with the origin at the
    top-left, so ``pixels.ravel()[y * width + x]`` is pixel ``(x, y)``.
    Values outside [0, 255] are allowed (iterates of reconstruction
    algorithms overshoot).
    """

    pixels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 2:
            raise DimensionMismatchError(f"image pixels must be 2D, got shape {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionMismatchError(f"image must be at least 1x1, got {a.shape}")
        object.__setattr__(self, "pixels", _frozen(a))

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "Image":
        values = np.asarray(values, dtype=np.float64)
        if values.size != width * height:
            raise DimensionMismatchError(
                f"{values.size} values given for a {width}x{height} image"
            )
        return cls(values.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def size(self) -> int:
        return self.pixels.size

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"Image(width={self.width}, height={self.height})"


def rmse(a: Image, b: Image) -> float:
    """Root-mean-square difference between two images, in gray levels."""
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"cannot compare {a.width}x{a.height} with {b.width}x{b.height}"
        )
    d = a.pixels - b.pixels
    return float(np.sqrt(np.mean(d * d)))


def round_half_away(x):
    """Round to nearest integer, ties away from zero (np.round ties to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


# --------------------------------------------------------------------- PGM

_WS = b" \t\r\n\v\f"


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.token_start = 0

    def skip_space_and_comments(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c in _WS:
                self.pos += 1
            elif c == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = len(data) if nl < 0 else nl + 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space_and_comments()
        start = self.token_start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise PGMTruncatedError(f"file ends before {what}", start)
            raise PGMHeaderError(f"expected integer {what}", start)
        return int(data[start : self.pos])


def _parse_pgm(data: bytes) -> Image:
    if len(data) < 2:
        raise PGMTruncatedError("file too short for PGM magic number", len(data))
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMHeaderError(f"unsupported magic number {magic!r}, expected P2 or P5", 0)
    r = _HeaderReader(data)
    r.pos = 2
    if r.pos < len(data) and data[r.pos : r.pos + 1] not in _WS + b"#":
        raise PGMHeaderError("missing whitespace after magic number", r.pos)
    width = r.integer("width")
    if width < 1:
        raise PGMHeaderError(f"invalid width {width}", r.token_start)
    height = r.integer("height")
    if height < 1:
        raise PGMHeaderError(f"invalid height {height}", r.token_start)
    maxval = r.integer("maxval")
    if not 1 <= maxval <= 255:
        raise PGMMaxvalError(f"unsupported maxval {maxval} (must be 1..255)", r.token_start)
    n = width * height

    if magic == b"P5":
        if r.pos >= len(data):
            raise PGMTruncatedError("missing whitespace before raster", r.pos)
        if data[r.pos : r.pos + 1] not in _WS:
            raise PGMHeaderError("expected single whitespace before raster", r.pos)
        start = r.pos + 1
        payload = data[start : start + n]
        if len(payload) < n:
            raise PGMTruncatedError(
                f"raster has {len(payload)} of {n} bytes", start + len(payload)
            )
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
        if values.max(initial=0) > maxval:
            bad = int(np.argmax(values > maxval))
            raise PGMMaxvalError(f"sample value exceeds maxval {maxval}", start + bad)
    else:
        values = np.empty(n, dtype=np.float64)
        for i in range(n):
            v = r.integer(f"sample {i}")
            if v > maxval:
                raise PGMMaxvalError(f"sample value {v} exceeds maxval {maxval}", r.token_start)
            values[i] = v
    return Image(values.reshape(height, width))


def load_pgm(path: PathLike) -> Image:
    """Read a binary (P5) or ASCII (P2) PGM file with maxval <= 255.

    Sample values are returned as gray levels as stored (no rescaling by
    maxval).
    """
    return _parse_pgm(Path(path).read_bytes())


def encode_pgm(image: Image) -> bytes:
    """P5 bytes for ``image``: round half away from zero, then clamp to [0, 255]."""
    q = np.clip(round_half_away(image.pixels), 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + q.tobytes()


def save_pgm(image: Image, path: PathLike) -> None:
    """Write ``image`` as an 8-bit binary PGM.

    The file is written to a temporary sibling and renamed into place.
    """
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(encode_pgm(image))
    os.replace(tmp, path)
