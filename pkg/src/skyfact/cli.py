"""Command-line front end.

    discover --config schema.json --input rows.csv --engine s-top-down \
        --dhat 3 --mhat 3 --tau 500 --store memory --metrics metrics.csv \
        --plots plots/ --output facts.jsonl

The config file declares the dimension and measure columns (with
directions) and may preset any flag; command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from skyfact.pipeline import (
    ENGINE_NAMES,
    IngestError,
    RunConfig,
    load_schema,
    parse_tau,
    run,
)
from skyfact.schema import SchemaError
from skyfact.store import StoreError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discover",
        description="Discover contextual-skyline facts for each appended tuple.",
    )
    parser.add_argument("--config", required=True, help="JSON schema/run config")
    parser.add_argument("--input", required=True, help="CSV rows in arrival order")
    parser.add_argument("--engine", choices=ENGINE_NAMES)
    parser.add_argument("--dhat", type=int, help="max bound dimension attributes")
    parser.add_argument("--mhat", type=int, help="max measure subspace size")
    parser.add_argument("--tau", help="prominence threshold p/q, or 'off'")
    parser.add_argument("--top-k", type=int, dest="top_k",
                        help="emit the k highest-prominence facts instead")
    parser.add_argument("--store", help="'memory' or a bucket-store directory")
    parser.add_argument("--output", help="fact JSONL path (default stdout)")
    parser.add_argument("--metrics", help="per-tuple metrics CSV path")
    parser.add_argument("--plots", help="directory for plot-data CSVs")
    parser.add_argument("--plot-window", type=int, dest="plot_window",
                        help="tuples per window in plot data (default 1000)")
    parser.add_argument("--audit-every", type=int, dest="audit_every",
                        help="run invariant audits every k tuples")
    parser.add_argument("--lenient", action="store_true",
                        help="skip bad rows instead of aborting")
    return parser


def _setting(args: argparse.Namespace, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, default)


def make_config(args: argparse.Namespace) -> RunConfig:
    with open(args.config, encoding="utf-8") as fh:
        raw = json.load(fh)
    schema = load_schema(raw)
    tau_text = _setting(args, raw, "tau", "off")
    store = _setting(args, raw, "store", "memory")
    lenient = args.lenient or bool(raw.get("lenient", False))
    return RunConfig(
        schema=schema,
        engine=_setting(args, raw, "engine", "s-top-down"),
        d_hat=_setting(args, raw, "dhat"),
        m_hat=_setting(args, raw, "mhat"),
        tau=parse_tau(str(tau_text)),
        top_k=_setting(args, raw, "top_k"),
        store_root=None if store == "memory" else str(store),
        audit_every=_setting(args, raw, "audit_every"),
        lenient=lenient,
        plot_window=int(_setting(args, raw, "plot_window", 1000)),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
    except (IngestError, SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"discover: {exc}", file=sys.stderr)
        return 2
    if config.store_root is not None:
        Path(config.store_root).mkdir(parents=True, exist_ok=True)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    metrics = open(args.metrics, "w", encoding="utf-8") if args.metrics else None
    try:
        run(
            args.input,
            config,
            output=out,
            metrics_out=metrics,
            plots_dir=args.plots,
            warn=sys.stderr,
        )
    except (IngestError, SchemaError, StoreError, OSError) as exc:
        print(f"discover: {exc}", file=sys.stderr)
        return 2
    finally:
        if out is not sys.stdout:
            out.close()
        if metrics is not None:
            metrics.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
