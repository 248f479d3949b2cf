"""Command-line entry point.

Subcommands: sparsity, reconstruct, curves, bench, verify, subband-demo.
Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import bounds
from .errors import BandsampError, DataError, NumericalError
from .experiment import (
    REPORT_COLUMNS,
    ExperimentConfig,
    audit_rows,
    read_report,
    run_bench,
    run_row,
    verify_row,
    write_atomic,
)
from .image import load_pgm
from .sparsity import REPORT_FIELDS, sparsity_at_target
from .subband import subband_demo

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_line(values) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(values)
    return buf.getvalue()


def _mask_arg(value: str) -> str:
    if value != "circular" and not value.startswith("regions:"):
        raise argparse.ArgumentTypeError("expected 'circular' or 'regions:<spec>'")
    return value


def _range_arg(value: str):
    try:
        lo, hi = (float(v) for v in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO,HI") from None
    if not 0 < lo < hi <= 1:
        raise argparse.ArgumentTypeError("need 0 < LO < HI <= 1")
    return lo, hi


def _bands_arg(value: str):
    try:
        return [tuple(int(x) for x in b.split("-")) for b in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO-HI[,LO-HI...]") from None


# ---------------------------------------------------------------- commands


def cmd_sparsity(args, out):
    image = load_pgm(args.image)
    rep = sparsity_at_target(image, args.target, quality=args.quality)
    out.write(_csv_line(REPORT_FIELDS))
    out.write(_csv_line(rep.csv_row()))
    if args.json:
        write_atomic(Path(args.json), rep.to_json() + "\n")
    return rep


def cmd_reconstruct(args, out):
    cfg = ExperimentConfig(
        images=[str(args.image)],
        jpeg_quality=args.quality,
        budget_rule="explicit",
        budget=args.budget,
        seed=args.seed,
        mask=args.mask,
        tol=args.tol,
        max_iters=args.max_iters,
        out=str(args.out),
    )
    outdir = Path(args.out)
    row, _, _ = run_row(args.image, cfg, artifacts_dir=outdir, trace=args.trace)
    text = _csv_line(REPORT_COLUMNS) + _csv_line([row[c] for c in REPORT_COLUMNS])
    write_atomic(outdir / "report.csv", text)
    out.write(text)
    return row


def cmd_curves(args, out):
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = bounds.log_sparsity_grid(args.range[0], args.range[1], args.points)
    meta = {"log_base": args.log_base}
    files = {}
    for name in ("theoretical", "cs_theoretical", "cs_experimental", "fit"):
        pts = bounds.curve_points(name, grid, args.log_base)
        files[f"{name}.csv"] = bounds.points_csv(pts, meta)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sparsity", "cs_theoretical", "cs_experimental", "rsblr_fit", "log_base"])
    for s in grid:
        s = float(s)
        w.writerow(
            [repr(s)]
            + [repr(bounds.redundancy_ratio(s, m, args.log_base)) for m in ("cs_theoretical", "cs_experimental", "rsblr_fit")]
            + [args.log_base]
        )
    files["redundancy.csv"] = buf.getvalue()

    files["table1.csv"] = bounds.points_csv(bounds.table1(), meta)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["image", "sparsity", "drf", "source", "anomalous", "rmse_rsblr", "rmse_jpeg"])
    for r in bounds.table2():
        w.writerow([r.image, repr(r.sparsity), repr(r.drf), "table2", str(r.anomalous).lower(),
                    repr(r.rmse_rsblr), "" if r.rmse_jpeg is None else repr(r.rmse_jpeg)])
    files["table2.csv"] = buf.getvalue()

    for fname, text in files.items():
        write_atomic(outdir / fname, text)
        out.write(f"wrote {outdir / fname}\n")
    return sorted(files)


def cmd_bench(args, out):
    cfg = ExperimentConfig.load(args.config)
    overrides = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        cfg = ExperimentConfig(**{**cfg.__dict__, **overrides})
    outdir = Path(args.out) if args.out else Path(cfg.out)
    rows = run_bench(cfg, outdir)
    out.write(f"{len(rows)} rows written to {outdir / 'report.csv'}\n")
    for r in rows:
        out.write(f"  {r['name']}: {r['status']}\n")
    return rows


def cmd_verify(args, out):
    index, recorded, fresh, bad = verify_row(Path(args.report_dir), args.row)
    _, rows = read_report(Path(args.report_dir))
    violations = audit_rows(rows)
    out.write(f"row {index} ({recorded['name']}): {'OK' if not bad else 'MISMATCH ' + ','.join(bad)}\n")
    for c in bad:
        out.write(f"  {c}: recorded {recorded.get(c)!r} recomputed {fresh[c]!r}\n")
    out.write(f"bound audit: {len(violations)} violating rows\n")
    if bad or violations:
        raise NumericalError("verification failed")
    return index


def cmd_subband_demo(args, out):
    rep = subband_demo(args.n, args.bands, args.seed)
    out.write(rep.to_text())
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        write_atomic(outdir / "subband.csv", rep.to_csv())
    return rep


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bandsamp", description="Random sampling and band-limited reconstruction toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sparsity", help="DCT sparsity at JPEG-matched RMS error")
    s.add_argument("image")
    s.add_argument("--quality", type=int, default=75)
    s.add_argument("--target", type=float, default=None, help="explicit RMS target (gray levels)")
    s.add_argument("--json", default=None, help="also write the report as JSON")
    s.set_defaults(func=cmd_sparsity)

    s = sub.add_parser("reconstruct", help="sample an image and reconstruct it")
    s.add_argument("image")
    s.add_argument("--budget", type=int, required=True, help="number of samples M")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--quality", type=int, default=75)
    s.add_argument("--mask", type=_mask_arg, default="circular")
    s.add_argument("--tol", type=float, default=1e-3)
    s.add_argument("--max-iters", type=int, default=10000)
    s.add_argument("--trace", action="store_true", help="write per-iteration trace.csv")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("curves", help="emit bound curves and fixture tables as CSV")
    s.add_argument("--range", type=_range_arg, default=(1e-4, 1.0))
    s.add_argument("--points", type=int, default=200)
    s.add_argument("--log-base", choices=sorted(bounds.LOG_BASES), default="e")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_curves)

    s = sub.add_parser("bench", help="run a corpus experiment from a config file")
    s.add_argument("config")
    s.add_argument("--out", default=None)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("verify", help="recompute a bench report row and audit bounds")
    s.add_argument("report_dir")
    s.add_argument("--row", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("subband-demo", help="two-band sub-band sampling demonstration")
    s.add_argument("--n", type=int, default=4096)
    s.add_argument("--bands", type=_bands_arg, default=[(512, 528), (1024, 1040)])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_subband_demo)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except NumericalError as e:
        print(f"bandsamp {args.command}: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError, BandsampError, ValueError) as e:
        print(f"bandsamp {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
