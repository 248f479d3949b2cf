"""Dimensionality-reduction bounds versus spectrum sparsity.

Curves (sparsity ``s = K/N``, dimensionality reduction factor ``drf = N/M``):

* inverse-sparsity limit: ``drf = 1/s``
* compressed-sensing bound with multiplier ``c``: ``s = 1 / (2 c drf log(drf) + 1)``
  (``c = 1`` theoretical, ``c = 1.75`` experimental)
* random-sampling/band-limited fit: ``drf = (0.8 + s) / (1.8 s)``

plus the published measurement tables as :class:`BoundPoint` fixtures.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DataError

__all__ = [
    "BoundPoint",
    "Table2Row",
    "C_THEORETICAL",
    "C_EXPERIMENTAL",
    "CS_REDUNDANCY_EXAMPLE",
    "LOG_BASES",
    "theoretical_drf",
    "cs_bound_sparsity",
    "invert_cs_bound",
    "fit_drf",
    "redundancy_ratio",
    "table1",
    "table2",
    "fixtures",
    "fixture_violations",
    "log_sparsity_grid",
    "curve_points",
    "points_csv",
]

C_THEORETICAL = 1.0
C_EXPERIMENTAL = 1.75
# Samples-per-nonzero-coefficient ratio M/K = 1/0.015 in the cited photonic-link experiment.
CS_REDUNDANCY_EXAMPLE = 67

LOG_BASES = {"e": math.e, "2": 2.0, "10": 10.0}

SOURCES = ("theoretical", "cs_theoretical", "cs_experimental", "fit", "table1", "table2")


@dataclass(frozen=True)
class BoundPoint:
    sparsity: float
    drf: float
    source: str
    anomalous: bool = False
    label: str = ""

    def __post_init__(self):
        if not 0 < self.sparsity <= 1:
            raise DataError(f"sparsity must be in (0, 1], got {self.sparsity}")
        if not self.drf >= 1:
            raise DataError(f"drf must be >= 1, got {self.drf}")
        if self.source not in SOURCES:
            raise DataError(f"unknown source {self.source!r}")


@dataclass(frozen=True)
class Table2Row:
    image: str
    sparsity: float
    drf: float
    rmse_rsblr: float
    rmse_jpeg: Optional[float]
    anomalous: bool = False

    def point(self) -> BoundPoint:
        return BoundPoint(self.sparsity, self.drf, "table2", self.anomalous, self.image)


def _check_sparsity(s):
    if not 0 < s <= 1:
        raise DataError(f"sparsity must be in (0, 1], got {s}")


def _log(x, base):
    if base == "e" or base is None:
        return math.log(x)
    b = LOG_BASES[str(base)] if str(base) in LOG_BASES else float(base)
    return math.log(x) / math.log(b)


def theoretical_drf(sparsity: float) -> float:
    _check_sparsity(sparsity)
    return 1.0 / sparsity


def cs_bound_sparsity(csdrf: float, c: float, base="e") -> float:
    """Largest sparsity at which compressed sensing reaches ``csdrf``."""
    if not csdrf >= 1:
        raise DataError(f"csdrf must be >= 1, got {csdrf}")
    if not c > 0:
        raise DataError(f"multiplier c must be positive, got {c}")
    return 1.0 / (2.0 * c * csdrf * _log(csdrf, base) + 1.0)


def invert_cs_bound(sparsity: float, c: float, base="e", rtol: float = 1e-12) -> float:
    """Solve ``cs_bound_sparsity(drf, c) == sparsity`` for ``drf >= 1`` by bisection."""
    _check_sparsity(sparsity)
    if sparsity == 1.0:
        return 1.0
    target = 1.0 / sparsity - 1.0  # 2 c drf log(drf), increasing in drf
    g = lambda d: 2.0 * c * d * _log(d, base) - target  # noqa: E731
    lo, hi = 1.0, 2.0
    while g(hi) < 0:
        lo, hi = hi, hi * 2.0
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_drf(sparsity: float) -> float:
    _check_sparsity(sparsity)
    return (0.8 + sparsity) / (1.8 * sparsity)


def redundancy_ratio(sparsity: float, method: str, base="e") -> float:
    """Inverse-sparsity limit divided by the method's reduction factor."""
    _check_sparsity(sparsity)
    if method == "cs_theoretical":
        drf = invert_cs_bound(sparsity, C_THEORETICAL, base)
    elif method == "cs_experimental":
        drf = invert_cs_bound(sparsity, C_EXPERIMENTAL, base)
    elif method == "rsblr_fit":
        drf = fit_drf(sparsity)
    else:
        raise DataError(f"unknown method {method!r}")
    return theoretical_drf(sparsity) / drf


# ----------------------------------------------------------------- fixtures

# Reported compressed sensing operating points, labelled in printed order.
_TABLE1 = [
    ("cs-1", 0.125, 2.0),
    ("cs-2", 0.0238, 10.92),
    ("cs-3", 0.00045, 33.0),
    ("cs-4", 0.0238, 5.67),
    ("cs-5", 0.0238, 8.56),
    ("cs-6", 0.0992, 2.52),
    ("cs-7", 0.08, 3.33),
    ("cs-8", 0.146, 1.73),
]

_TABLE2 = [
    Table2Row("Mamm", 0.044, 11.0, 1.58, 1.48),
    Table2Row("Ango", 0.05, 10.5, 1.36, 1.25),
    # Printed as 0.89; exceeds its own inverse-sparsity bound (likely 0.089).
    Table2Row("Test4CS", 0.89, 5.55, 2.15, 1.62, anomalous=True),
    Table2Row("Moon", 0.105, 5.0, 2.55, 2.5),
    Table2Row("Lena512", 0.19, 3.0, 3.3, 3.9),
    Table2Row("Aerial photo", 0.2, 3.0, 4.76, 4.5),
    Table2Row("Man", 0.227, 2.38, 4.12, 4.0),
    Table2Row("ManSprse", 0.024, 16.7, 5.6, None),
    Table2Row("Multiphoton", 0.238, 2.26, 4.73, 4.89),
    Table2Row("Barbara512", 0.265, 1.61, 4.15, 3.91),
    Table2Row("Westconcord", 0.301, 1.92, 7.48, 7.21),
]


def table1() -> List[BoundPoint]:
    return [BoundPoint(s, d, "table1", False, src) for src, s, d in _TABLE1]


def table2() -> List[Table2Row]:
    return list(_TABLE2)


def fixtures() -> List[BoundPoint]:
    """Both measurement tables as points, in printed order (8 then 11)."""
    return table1() + [r.point() for r in _TABLE2]


def fixture_violations(c: float = C_EXPERIMENTAL, base="e", points=None) -> List[BoundPoint]:
    """Points lying above the CS curve, i.e. ``sparsity > cs_bound_sparsity(drf, c)``."""
    points = table1() if points is None else points
    return [p for p in points if p.sparsity > cs_bound_sparsity(p.drf, c, base)]


# ------------------------------------------------------------------- curves


def log_sparsity_grid(lo: float = 1e-4, hi: float = 1.0, n: int = 200) -> np.ndarray:
    if not 0 < lo < hi <= 1 or n < 2:
        raise DataError(f"invalid sparsity range [{lo}, {hi}] with {n} points")
    return np.logspace(math.log10(lo), math.log10(hi), n)


def curve_points(name: str, sparsities: Sequence[float], base="e") -> List[BoundPoint]:
    """Sample one of the named curves on the given sparsities.

    ``cs_theoretical`` and ``cs_experimental`` are evaluated through
    :func:`invert_cs_bound`.
    """
    out = []
    for s in sparsities:
        s = float(s)
        if name == "theoretical":
            d = theoretical_drf(s)
        elif name == "cs_theoretical":
            d = invert_cs_bound(s, C_THEORETICAL, base)
        elif name == "cs_experimental":
            d = invert_cs_bound(s, C_EXPERIMENTAL, base)
        elif name == "fit":
            d = fit_drf(s)
        else:
            raise DataError(f"unknown curve {name!r}")
        out.append(BoundPoint(s, d, name))
    return out


def points_csv(points: Sequence[BoundPoint], extra: Optional[Dict[str, str]] = None) -> str:
    """CSV with columns sparsity, drf, source, anomalous (plus constant extras)."""
    extra = extra or {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sparsity", "drf", "source", "anomalous", *extra.keys()])
    for p in points:
        w.writerow([repr(p.sparsity), repr(p.drf), p.source, str(p.anomalous).lower(), *extra.values()])
    return buf.getvalue()
