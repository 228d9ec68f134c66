"""Command-line entry point: ``arteryflow run|converge|config``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import parse_config
from .convergence import convergence_study, damped_wave_reference, write_table
from .errors import ConfigError, NumericalFailure
from .integrator import run
from .io import RunMetrics, ensure_writable, write_snapshots
from .scenarios import PRESETS

log = logging.getLogger("arteryflow")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _pairs(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _times(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"cannot read snapshot times {text!r}", field="run.snapshots") from None


def _load(args):
    overrides = _pairs(args.set)
    if getattr(args, "snapshots", None):
        overrides["run.snapshots"] = ",".join(str(t) for t in _times(args.snapshots))
    return parse_config(args.config, scenario=args.scenario, overrides=overrides)


def _reference(config):
    if config.scenario == "damped_wave":
        return damped_wave_reference(config)
    if config.scenario == "dead_man":
        return lambda x, t: np.zeros_like(x)
    return None


def cmd_run(args):
    config = _load(args)
    out = ensure_writable(args.out)
    (out / "config.txt").write_text(config.dumps(), encoding="ascii")
    series = run(config, backend=args.backend)
    metrics = RunMetrics.from_series(series, _reference(config))
    write_snapshots(series, out, metrics)
    log.info("%d steps, %d snapshots, max|Q| = %.3e, mass drift = %.3e",
             series.steps, len(series), metrics.max_abs_q_final, metrics.mass_drift_relative)
    return EXIT_OK


def cmd_converge(args):
    config = _load(args)
    reference = _reference(config)
    if reference is None:
        raise ConfigError("convergence needs an exact reference (damped_wave or dead_man)",
                          field="scenario")
    try:
        grids = [int(g) for g in args.grids.split(",") if g.strip()]
    except ValueError:
        raise ConfigError(f"cannot read grid list {args.grids!r}", field="--grids") from None
    x_max = None if args.x_max is None else args.x_max * config.length
    rows = convergence_study(config, grids, reference, x_max=x_max, workers=args.workers)
    out = ensure_writable(args.out)
    write_table(rows, out / "convergence.csv")
    for r in rows:
        order = "" if r.order is None else f"{r.order:.3f}"
        print(f"J={r.j_cells:6d}  L2={r.l2_error:.6e}  order={order}")
    return EXIT_NUMERICAL if any(r.error for r in rows) else EXIT_OK


def cmd_config(args):
    sys.stdout.write(_load(args).dumps())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="arteryflow", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", choices=PRESETS)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (unique suffix allowed)")

    p = sub.add_parser("run", help="run one scenario and write CSV snapshots")
    common(p)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--snapshots", help="comma-separated output times [s]")
    p.add_argument("--backend", choices=("compiled", "python"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="grid-refinement study against the exact solution")
    common(p)
    p.add_argument("--grids", default="375,750,1500")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--x-max", type=float, default=None,
                   help="restrict the error to x <= X_MAX * L")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("config", help="print the fully expanded configuration")
    common(p)
    p.set_defaults(func=cmd_config)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.scenario is None and args.config is None:
        print("arteryflow: error: need --scenario or --config", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"arteryflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"arteryflow: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"arteryflow: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
