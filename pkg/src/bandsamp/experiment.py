"""Reproducible corpus experiments: sparsity, sample budget, reconstruction.

A run is fully determined by an :class:`ExperimentConfig` (serialized as a
flat ``key = value`` file) and the input images. Canonical outputs
(``report.csv``, ``scatter.csv``, ``meta.json``) are byte-identical across
runs; wall-clock timings go to the separate ``timings.csv``.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional

from .bounds import LOG_BASES, fit_drf
from .errors import BandsampError, DataError
from .image import load_pgm, rmse, save_pgm
from .masks import SpectralMask, circular_lowpass_mask, mask_from_regions, parse_regions, random_sample_set
from .reconstruct import GPParams, gp_reconstruct
from .rng import SplitMix64
from .sparsity import jpeg_target_rmse, sparsity_at_target

__all__ = [
    "CONFIG_VERSION",
    "ExperimentConfig",
    "REPORT_COLUMNS",
    "sample_budget",
    "build_mask",
    "run_row",
    "run_bench",
    "read_report",
    "verify_row",
    "audit_rows",
    "write_atomic",
]

CONFIG_VERSION = 1
BUDGET_RULES = ("explicit", "from_fit", "from_sparsity_multiple")

REPORT_COLUMNS = [
    "name",
    "N",
    "K",
    "sparsity",
    "M",
    "drf",
    "rmse_rsblr",
    "rmse_jpeg",
    "gp_iterations",
    "converged",
    "seed",
    "budget_rule",
    "mask",
    "config_hash",
    "status",
]


@dataclass(frozen=True)
class ExperimentConfig:
    images: List[str] = field(default_factory=list)
    jpeg_quality: int = 75
    budget_rule: str = "from_fit"
    budget: Optional[int] = None
    alpha: float = 1.875
    seed: int = 0
    mask: str = "circular"
    tol: float = 1e-3
    max_iters: int = 10000
    workers: int = 1
    out: str = "bench_out"
    save_images: bool = False
    log_base: str = "e"

    def __post_init__(self):
        if self.budget_rule not in BUDGET_RULES:
            raise DataError(f"budget_rule must be one of {BUDGET_RULES}, got {self.budget_rule!r}")
        if self.budget_rule == "explicit" and self.budget is None:
            raise DataError("budget_rule = explicit needs budget")
        if self.budget_rule != "explicit" and self.budget is not None:
            raise DataError(f"budget is only used with budget_rule = explicit, not {self.budget_rule}")
        if not 1 <= self.jpeg_quality <= 100:
            raise DataError(f"jpeg_quality must be in 1..100, got {self.jpeg_quality}")
        if not (self.mask == "circular" or self.mask.startswith("regions:")):
            raise DataError(f"mask must be 'circular' or 'regions:<spec>', got {self.mask!r}")
        if self.log_base not in LOG_BASES:
            raise DataError(f"log_base must be one of {sorted(LOG_BASES)}, got {self.log_base!r}")
        if self.workers < 1:
            raise DataError("workers must be >= 1")
        GPParams(self.max_iters, self.tol)

    @property
    def gp_params(self) -> GPParams:
        return GPParams(max_iters=self.max_iters, tol=self.tol)

    # -------------------------------------------------------- serialization

    def to_text(self) -> str:
        """Canonical ``key = value`` form; equal configs give equal text."""
        lines = [f"version = {CONFIG_VERSION}"]
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "images":
                v = ", ".join(v)
            elif v is None:
                continue
            elif isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @property
    def hash(self) -> str:
        """Digest of the settings that affect results (``out`` and ``workers`` excluded)."""
        keep = [ln for ln in self.to_text().splitlines(True) if not ln.startswith(("out =", "workers ="))]
        return hashlib.sha256("".join(keep).encode()).hexdigest()[:16]

    @classmethod
    def from_text(cls, text: str, base_dir: Optional[Path] = None) -> "ExperimentConfig":
        """Parse a config; relative image paths resolve against ``base_dir``."""
        cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            cp.read_string("[bench]\n" + text)
        except configparser.Error as e:
            raise DataError(f"cannot parse config: {e}") from None
        raw = dict(cp["bench"])
        version = raw.pop("version", None)
        if version is None or int(version) != CONFIG_VERSION:
            raise DataError(f"config version must be {CONFIG_VERSION}, got {version}")
        known = {f.name: f for f in fields(cls)}
        unknown = set(raw) - set(known)
        if unknown:
            raise DataError(f"unknown config keys: {sorted(unknown)}")
        kw = {}
        try:
            for k, v in raw.items():
                if k == "images":
                    paths = [p.strip() for p in v.split(",") if p.strip()]
                    if base_dir is not None:
                        paths = [str(base_dir / p) if not os.path.isabs(p) else p for p in paths]
                    kw[k] = paths
                elif k in ("jpeg_quality", "budget", "seed", "max_iters", "workers"):
                    kw[k] = int(v)
                elif k in ("alpha", "tol"):
                    kw[k] = float(v)
                elif k == "out" and base_dir is not None and not os.path.isabs(v.strip()):
                    kw[k] = str(base_dir / v.strip())
                elif k == "save_images":
                    kw[k] = cp.getboolean("bench", k)
                else:
                    kw[k] = v.strip()
        except ValueError as e:
            raise DataError(f"bad config value: {e}") from None
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        return cls.from_text(path.read_text(), base_dir=path.parent)


def write_atomic(path: Path, data) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    if isinstance(data, str):
        tmp.write_text(data)
    else:
        tmp.write_bytes(data)
    os.replace(tmp, path)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def sample_budget(cfg: ExperimentConfig, n: int, k: int, sparsity: float) -> int:
    """Number of samples ``M`` under the configured rule.

    Derived budgets are clamped to ``1..n``; an explicit budget above ``n``
    raises :class:`DataError`.
    """
    if cfg.budget_rule == "explicit":
        if cfg.budget > n:
            raise DataError(f"budget {cfg.budget} exceeds the {n} pixels of the image")
        m = cfg.budget
    elif cfg.budget_rule == "from_fit":
        m = _round_half_up(n / fit_drf(sparsity))
    else:
        m = _round_half_up(cfg.alpha * k)
    return max(1, min(n, int(m)))


def build_mask(cfg: ExperimentConfig, width: int, height: int, m: int) -> SpectralMask:
    if cfg.mask == "circular":
        return circular_lowpass_mask(width, height, m)
    return mask_from_regions(width, height, parse_regions(cfg.mask[len("regions:") :]))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_row(path, cfg: ExperimentConfig, artifacts_dir: Optional[Path] = None, name=None, trace=False):
    """Process one image; returns ``(row, timings, result)``.

    ``row`` maps every :data:`REPORT_COLUMNS` entry to its string value.
    When ``artifacts_dir`` is given the reconstruction, sample map, mask
    bitmap and sample list are written there.
    """
    path = Path(path)
    name = name or path.stem
    timings = {}
    t0 = time.perf_counter()
    image = load_pgm(path)
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    target = jpeg_target_rmse(image, cfg.jpeg_quality)
    rep = sparsity_at_target(image, target)
    timings["sparsity"] = time.perf_counter() - t0

    n = image.size
    m = sample_budget(cfg, n, rep.k_required, rep.sparsity)
    t0 = time.perf_counter()
    samples = random_sample_set(image, m, cfg.seed)
    mask = build_mask(cfg, image.width, image.height, m)
    timings["sampling"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    params = GPParams(max_iters=cfg.max_iters, tol=cfg.tol, record_trace=trace)
    result = gp_reconstruct(samples, mask, params)
    timings["reconstruct"] = time.perf_counter() - t0

    if artifacts_dir is not None:
        artifacts_dir = Path(artifacts_dir)
        artifacts_dir.mkdir(parents=True, exist_ok=True)
        save_pgm(result.image, artifacts_dir / "reconstruction.pgm")
        save_pgm(samples.render(), artifacts_dir / "samples.pgm")
        mask.save_pgm(artifacts_dir / "mask.pgm")
        samples.save(artifacts_dir / "samples.txt")
        if trace:
            write_atomic(artifacts_dir / "trace.csv", result.trace_csv())

    row = {
        "name": name,
        "N": n,
        "K": rep.k_required,
        "sparsity": rep.sparsity,
        "M": m,
        "drf": n / m,
        "rmse_rsblr": rmse(image, result.image),
        "rmse_jpeg": target,
        "gp_iterations": result.iterations_run,
        "converged": result.converged,
        "seed": cfg.seed,
        "budget_rule": cfg.budget_rule,
        "mask": cfg.mask,
        "config_hash": cfg.hash,
        "status": "ok",
    }
    return {k: _fmt(v) for k, v in row.items()}, timings, result


def _error_row(name, cfg, exc):
    row = {c: "" for c in REPORT_COLUMNS}
    row.update(
        name=name,
        seed=str(cfg.seed),
        budget_rule=cfg.budget_rule,
        mask=cfg.mask,
        config_hash=cfg.hash,
        status=f"error: {type(exc).__name__}: {exc}".replace("\n", " "),
    )
    return row


def _rows_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _entries(cfg):
    entries = sorted((Path(p).stem, p) for p in cfg.images)
    names = [e[0] for e in entries]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise DataError(f"duplicate image names in corpus: {sorted(dup)}")
    return entries


def run_bench(cfg: ExperimentConfig, out: Optional[Path] = None) -> List[Dict[str, str]]:
    """Run every image in the corpus and write the report files to ``out``.

    Rows are ordered by image name regardless of completion order. A failing
    image yields a row whose ``status`` holds the error; the run continues.
    """
    out = Path(out if out is not None else cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = _entries(cfg)

    def job(entry):
        name, path = entry
        art = out / "images" / name if cfg.save_images else None
        try:
            row, timings, _ = run_row(path, cfg, art, name)
        except (BandsampError, OSError) as e:
            return _error_row(name, cfg, e), {}
        return row, timings

    if cfg.workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(job, entries))
    else:
        results = [job(e) for e in entries]

    rows = [r for r, _ in results]
    write_atomic(out / "report.csv", _rows_csv(rows, REPORT_COLUMNS))

    scatter = [
        {
            "name": r["name"],
            "sparsity": r["sparsity"],
            "drf": r["drf"],
            "fit_drf": repr(fit_drf(float(r["sparsity"]))),
        }
        for r in rows
        if r["status"] == "ok"
    ]
    write_atomic(out / "scatter.csv", _rows_csv(scatter, ["name", "sparsity", "drf", "fit_drf"]))

    timing_rows = [
        {"name": r["name"], "stage": stage, "seconds": f"{sec:.6f}"}
        for r, (_, t) in zip(rows, results)
        for stage, sec in t.items()
    ]
    write_atomic(out / "timings.csv", _rows_csv(timing_rows, ["name", "stage", "seconds"]))

    meta = {
        "config_hash": cfg.hash,
        "config": cfg.to_text(),
        "curve_log_base": cfg.log_base,
        "rows": len(rows),
    }
    write_atomic(out / "meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return rows


def read_report(out: Path):
    """``(config, rows)`` from a bench output directory."""
    out = Path(out)
    meta = json.loads((out / "meta.json").read_text())
    cfg = ExperimentConfig.from_text(meta["config"])
    with open(out / "report.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return cfg, rows


def verify_row(out: Path, index: Optional[int] = None):
    """Recompute one report row from its recorded parameters.

    Without ``index`` the row is chosen with ``SplitMix64(seed)``. Returns
    ``(index, recorded_row, recomputed_row, mismatched_columns)``.
    """
    cfg, rows = read_report(out)
    if not rows:
        raise DataError("report has no rows to verify")
    if index is None:
        index = SplitMix64(cfg.seed).below(len(rows))
    if not 0 <= index < len(rows):
        raise DataError(f"row index {index} out of range 0..{len(rows) - 1}")
    recorded = rows[index]
    paths = dict(_entries(cfg))
    try:
        fresh, _, _ = run_row(paths[recorded["name"]], cfg, name=recorded["name"])
    except (BandsampError, OSError) as e:
        fresh = _error_row(recorded["name"], cfg, e)
    bad = [c for c in REPORT_COLUMNS if recorded.get(c) != fresh[c]]
    return index, recorded, fresh, bad


def audit_rows(rows) -> List[Dict[str, str]]:
    """Rows claiming JPEG-level quality beyond the inverse-sparsity limit.

    A converged row with ``rmse_rsblr <= rmse_jpeg`` and ``drf > 1/sparsity``
    would beat the theoretical bound and indicates a bookkeeping error.
    """
    bad = []
    for r in rows:
        if r.get("status") != "ok" or r.get("converged") != "true":
            continue
        if float(r["rmse_rsblr"]) <= float(r["rmse_jpeg"]) and float(r["drf"]) > 1.0 / float(r["sparsity"]):
            bad.append(r)
    return bad
