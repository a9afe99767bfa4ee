"""Command line: run scenario sweeps, validate configs, print defaults."""

from __future__ import annotations

import argparse
import os
import sys

from .config import (ConfigError, ScenarioConfig, default_config,
                     parse_config, render_config)
from .metrics import export_csv
from .runner import SimulationError, run_metadata, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sitelink",
        description="Deterministic LTE / 5G mmWave uplink video simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario sweep and export CSV")
    run.add_argument("--preset", choices=["1", "2", "3"],
                     help="scenario preset (UE sweep, rate sweep, speed sweep)")
    run.add_argument("--rat", choices=["lte", "nr", "both"], default=None,
                     help="radio access technology to simulate")
    run.add_argument("--reps", type=int, default=None,
                     help="replications per sweep point")
    run.add_argument("--seed", type=int, default=None, help="base seed")
    run.add_argument("--out", default="results.csv", help="output CSV path")
    run.add_argument("--config", default=None, help="config file to load")
    run.add_argument("--trace", action="store_true",
                     help="write one event-trace file per run")
    run.add_argument("--workers", type=int, default=1,
                     help="parallel replication workers (output is identical "
                          "for any degree)")

    val = sub.add_parser("validate", help="check a config file")
    val.add_argument("--config", required=True, help="config file to check")

    sub.add_parser("print-defaults",
                   help="print the complete default config (parseable)")
    return parser


def _load_config(args) -> ScenarioConfig:
    text = ""
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
    overrides = {}
    if args.preset:
        overrides["preset"] = f"scenario{args.preset}"
    if args.rat:
        overrides["rats"] = "lte,nr" if args.rat == "both" else args.rat
    if args.reps is not None:
        overrides["replications"] = str(args.reps)
    if args.seed is not None:
        overrides["seed_base"] = str(args.seed)
    return parse_config(text, overrides)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "print-defaults":
        sys.stdout.write(render_config(default_config()))
        return 0

    if args.command == "validate":
        try:
            with open(args.config) as fh:
                parse_config(fh.read())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except ConfigError as exc:
            for err in exc.errors:
                print(f"invalid: {err}", file=sys.stderr)
            return 1
        print(f"{args.config}: ok")
        return 0

    # run
    try:
        cfg = _load_config(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        for err in exc.errors:
            print(f"invalid: {err}", file=sys.stderr)
        return 1

    out_dir = os.path.dirname(os.path.abspath(args.out))
    trace_dir = out_dir if args.trace else None
    try:
        results = run_scenario(cfg, workers=max(args.workers, 1),
                               trace_dir=trace_dir)
        export_csv(results, args.out)
    except (SimulationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    meta_path = args.out + ".meta"
    with open(meta_path, "w") as fh:
        fh.write(run_metadata(cfg))
    print(f"wrote {len(results)} rows to {args.out} (metadata: {meta_path})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
