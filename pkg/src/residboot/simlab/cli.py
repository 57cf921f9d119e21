"""Command-line entry point: ``residboot approx|symmetry|gof [options]``.

Options override config-file values.  Exit codes: 0 success, 2 configuration
error, 3 worker failure (partial results flushed to the checkpoint).
"""

from __future__ import annotations

import argparse
import sys

from .config import STUDIES, ConfigError, build_config, load_config_file
from .runner import WorkerFailure, run_study
from .tables import emit

__all__ = ["main", "build_parser"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="residboot",
        description="Monte Carlo studies of the smooth and non-smooth residual bootstrap",
    )
    sub = parser.add_subparsers(dest="study", required=True)
    for study in STUDIES:
        p = sub.add_parser(study, help=f"run the {study} study")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--n", help="comma-separated sample sizes")
        p.add_argument("--sims", type=int, help="number of simulation runs")
        p.add_argument("--boot", type=int, help="bootstrap replicates per run")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--scheme", choices=["nonsmooth", "smooth", "both"], help="bootstrap scheme(s)")
        p.add_argument("--stat", help="statistics to run (comma list or 'both')")
        p.add_argument("--alpha", help="comma-separated levels")
        p.add_argument("--format", choices=["csv", "markdown"], help="output format")
        p.add_argument("--workers", type=int, help="parallel workers over simulations")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--checkpoint", help="checkpoint file for resumable runs")
        p.add_argument("--error", help="error law: normal, t3, or a distribution spec")
        p.add_argument("--h", dest="h", help="regression bandwidth ('auto' or value)")
        p.add_argument("--s", dest="s", help="smoothing bandwidth ('auto' or value)")
        if study == "symmetry":
            p.add_argument("--family", choices=["skewnormal", "tmix"], help="scenario family")
            p.add_argument("--d", help="skew-normal shape values (comma list)")
            p.add_argument("--p", help="mixture weights (comma list)")
        if study == "gof":
            p.add_argument("--a", help="truth curvature values (comma list)")
    return parser


_RAW_KEYS = {
    "n": "n",
    "sims": "n_sims",
    "boot": "n_boot",
    "seed": "seed",
    "scheme": "schemes",
    "stat": "stats",
    "alpha": "alphas",
    "format": "format",
    "workers": "workers",
    "out": "out",
    "checkpoint": "checkpoint",
    "error": "error",
    "h": "h",
    "s": "s",
    "family": "family",
    "d": "d",
    "p": "p",
    "a": "a",
}


def _overrides(args):
    from .config import _coerce  # same coercion rules as config files

    out = {}
    for arg_name, field in _RAW_KEYS.items():
        val = getattr(args, arg_name, None)
        if val is None:
            continue
        out[field] = _coerce(field, str(val)) if isinstance(val, str) else val
    return out


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        file_values = load_config_file(args.config) if args.config else {}
        file_values.pop("study", None)
        cfg = build_config(args.study, file_values, _overrides(args))
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    try:
        table = run_study(cfg)
    except WorkerFailure as e:
        print(f"worker failure: {e}", file=sys.stderr)
        return 3

    payload = emit(table, cfg.format)
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload.decode())
    return 0


if __name__ == "__main__":
    sys.exit(main())
