"""Command-line front end.

    confluent-susy partner --profile fig1
    confluent-susy partner --model lame --m 0.5 --epsilon 0.1 --D -45 --format json
    confluent-susy scan-d --model free --kappa 1 --D-range -5 5 --samples 101
    confluent-susy bands --m 0.1
    confluent-susy verify --suite all

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 singular transform,
4 numerical failure.
"""
import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, NumericalError, QuadratureError, SingularTransformError
from .runs import PROFILES, PartnerDataset, RunConfig, config_from_mapping, overlay, \
    run_bands, run_partner, run_scan
from .suites import SUITES, run_suites
from .svg import line_chart

OUTPUT_DIR_ENV = "CONFLUENT_SUSY_OUTPUT_DIR"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3
EXIT_NUMERICAL = 4


class UsageError(Exception):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, str):
        return v
    return "%.17g" % v


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json(payload):
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _crossing_json(v):
    # JSON has no infinities; a zero of w at +-infinity is written as a string
    if v is None:
        return None
    return float(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf")


# ---------------------------------------------------------------- config plumbing

def _add_model_args(p, with_d=True):
    p.add_argument("--profile", choices=sorted(PROFILES), help="named figure preset")
    p.add_argument("--config", help="JSON file with the metadata schema of a json output")
    p.add_argument("--model", choices=("free", "lame"))
    p.add_argument("--kappa", type=float, dest="kappa1", help="free model: kappa1 > 0")
    p.add_argument("--m", type=float, help="lame model: elliptic parameter 0 < m < 1")
    p.add_argument("--epsilon", type=float, dest="epsilon1", help="factorization energy eps1")
    if with_d:
        p.add_argument("--D", type=float, help="constant in w = D + W(u1, du1/deps1)")
    p.add_argument("--x0", type=float, help="free: well centre (sets D); lame: translation")
    p.add_argument("--branch", choices=("auto", "beta", "inverse_beta"),
                   help="lame Bloch branch (default auto: the one nonsingular for this D)")
    p.add_argument("--orientation", choices=("growing", "decaying"), help="free seed e^{+-kx}")
    p.add_argument("--grid", nargs=3, metavar=("XMIN", "XMAX", "N"))
    p.add_argument("--output", "-o", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"))


def _parse_grid(values):
    try:
        xmin, xmax, n = float(values[0]), float(values[1]), int(values[2])
    except ValueError as exc:
        raise UsageError(f"--grid expects XMIN XMAX N: {exc}") from exc
    return (xmin, xmax, n)


def build_config(args):
    """defaults < profile < config file < explicit flags."""
    cfg = RunConfig()
    if getattr(args, "profile", None):
        cfg = PROFILES[args.profile]
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = config_from_mapping(data, cfg)
    flags = {}
    for key in ("model", "kappa1", "m", "epsilon1", "D", "x0", "branch", "orientation",
                "output", "format"):
        v = getattr(args, key, None)
        if v is not None:
            flags[key] = v
    if getattr(args, "grid", None) is not None:
        flags["grid"] = _parse_grid(args.grid)
    return overlay(cfg, flags)


def _destination(cfg, stem):
    if cfg.output:
        return cfg.output
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return str(Path(out_dir) / f"{stem}.{cfg.format}")
    return "-"


def _emit(text, dest):
    if dest == "-":
        sys.stdout.write(text)
        return
    path = Path(dest)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


# ---------------------------------------------------------------- subcommands

def render_partner(ds: PartnerDataset, fmt):
    cols = ds.columns
    if fmt == "csv":
        return _csv(ds.COLUMNS, zip(*(cols[c] for c in ds.COLUMNS)))
    return _json({
        "metadata": ds.config.metadata(),
        "columns": list(ds.COLUMNS),
        "data": {c: [float(v) for v in cols[c]] for c in ds.COLUMNS},
    })


def cmd_partner(args):
    cfg = build_config(args)
    ds = run_partner(cfg)
    stem = args.profile or f"partner_{ds.config.model}"
    _emit(render_partner(ds, ds.config.format), _destination(ds.config, stem))
    if args.svg:
        c = ds.columns
        Path(args.svg).write_text(line_chart(
            c["x"], {"V": c["V"], "Vt": c["Vt"], "|psi|^2": c["psi2"]}, title=stem))
    return EXIT_OK


def cmd_scan_d(args):
    cfg = build_config(args)
    lo, hi = args.D_range
    res = run_scan(cfg, lo, hi, args.samples)
    lame = res.config.model == "lame"
    header = ["D", "nonsingular", "crossing_x"] + (["branch"] if lame else [])
    rows = []
    for i, D in enumerate(res.D):
        row = [float(D), bool(res.nonsingular[i]), res.crossing[i]]
        if lame:
            row.append(res.branch[i])
        rows.append(row)
    if res.config.format == "csv":
        text = _csv(header, rows)
    else:
        text = _json({
            "metadata": res.config.metadata(),
            "D_range": [lo, hi, args.samples],
            "columns": header,
            "rows": [[float(r[0]), bool(r[1]), _crossing_json(r[2])] + r[3:] for r in rows],
        })
    _emit(text, _destination(res.config, f"scan_d_{res.config.model}"))
    return EXIT_OK


def cmd_bands(args):
    if not 0.0 < args.m < 1.0:
        raise UsageError(f"--m must lie in (0, 1), got {args.m}")
    if args.periods < 1:
        raise UsageError("--periods must be a positive integer")
    bands, numeric, bs = run_bands(args.m, args.periods, args.points_per_period)
    analytic = bands.band_edges
    names = ("band_edge_m", "band_edge_1", "band_edge_1_plus_m")
    rows = [(n, a, float(v), abs(float(v) - a)) for n, a, v in zip(names, analytic, numeric)]
    lo_a, hi_a = bands.gaps[1]
    rows.append(("finite_gap_lower", lo_a, float(numeric[1]), abs(float(numeric[1]) - lo_a)))
    rows.append(("finite_gap_upper", hi_a, float(numeric[2]), abs(float(numeric[2]) - hi_a)))
    fmt = args.format or "csv"
    if fmt == "csv":
        text = _csv(("quantity", "analytic", "numeric", "discrepancy"), rows)
    else:
        text = _json({
            "metadata": {"model": "lame", "m": args.m, "periods": args.periods,
                         "points_per_period": args.points_per_period, "tool_version": __version__},
            "edges": [{"quantity": r[0], "analytic": r[1], "numeric": r[2], "discrepancy": r[3]}
                      for r in rows[:3]],
            "finite_gap": {"analytic": [lo_a, hi_a], "numeric": [float(numeric[1]), float(numeric[2])]},
            "numeric_gaps": [list(g) for g in bs.gaps()],
        })
    cfg = RunConfig(model="lame", output=args.output, format=fmt)
    _emit(text, _destination(cfg, f"bands_m{args.m:g}"))
    return EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = run_suites(names)
    width = max(len(c.name) for c in checks)
    print(f"{'suite':<9} {'check':<{width}} {'value':>11} {'tol':>8}  result")
    for c in checks:
        print(f"{c.suite:<9} {c.name:<{width}} {c.value:11.3e} {c.tolerance:8.0e}  "
              f"{'PASS' if c.passed else 'FAIL'}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


# ---------------------------------------------------------------- entry point

def build_parser():
    parser = argparse.ArgumentParser(
        prog="confluent-susy",
        description="Confluent second-order SUSY partners of the free particle and Lame potential.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partner", help="partner potential and bound state on a grid")
    _add_model_args(p)
    p.add_argument("--svg", help="also write a line chart of V, Vt and |psi|^2")
    p.set_defaults(func=cmd_partner)

    p = sub.add_parser("scan-d", help="classify D values as singular or not")
    _add_model_args(p, with_d=False)
    p.add_argument("--D-range", nargs=2, type=float, required=True, metavar=("LO", "HI"),
                   dest="D_range")
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(func=cmd_scan_d)

    p = sub.add_parser("bands", help="analytic vs numeric Lame band edges")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--periods", type=int, default=16)
    p.add_argument("--points-per-period", type=int, default=400)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("verify", help="run the built-in identity and oracle checks")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SingularTransformError as exc:
        print(f"error: singular transform: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, QuadratureError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `| head`); stop quietly
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
