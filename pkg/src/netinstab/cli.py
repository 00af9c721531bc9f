"""Command-line entry point.

netinstab analyze --model <file|piezo> --variant appendix|printed
                  --method <comma list|all> --out <dir> [hyperparameter and
                  grid options]
netinstab concordance --summary <summary.json> [--top-k K]
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import NetinstabError
from .report import (
    METHODS,
    AnalysisConfig,
    concordance_from_summary,
    concordance_to_dict,
    run,
)


def _parse_methods(raw: str) -> tuple[str, ...]:
    if raw.strip() == "all":
        return METHODS
    return tuple(m.strip() for m in raw.split(",") if m.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netinstab")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run analyses on a model file and emit artifacts")
    an.add_argument("--model", required=True, help="model JSON path, or 'piezo' for the bundled fixture")
    an.add_argument("--variant", choices=("appendix", "printed"), default="appendix")
    an.add_argument("--method", required=True, help=f"comma-separated subset of {','.join(METHODS)}, or 'all'")
    an.add_argument("--out", required=True, help="output directory for artifacts")
    an.add_argument("--seed", type=int, nargs="+", default=[0], help="training seed(s)")
    an.add_argument("--iters", type=int, default=500)
    an.add_argument("--lr", type=float, default=0.5)
    an.add_argument("--leaky-slope", type=float, default=0.01)
    an.add_argument("--perturb-node", type=int, default=None)
    an.add_argument("--perturb-factor", type=float, default=2.0)
    an.add_argument("--delta-min", type=float, default=0.5)
    an.add_argument("--delta-max", type=float, default=3.0)
    an.add_argument("--delta-step", type=float, default=0.5)
    an.add_argument("--max-motif-size", type=int, default=6)
    an.add_argument("--top-k", type=int, default=2)

    co = sub.add_parser("concordance", help="recompute ranking agreement from a summary.json")
    co.add_argument("--summary", required=True, help="path to a summary.json written by analyze")
    co.add_argument("--top-k", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            config = AnalysisConfig(
                model_path=args.model,
                variant=args.variant,
                methods=_parse_methods(args.method),
                output_dir=args.out,
                seeds=tuple(args.seed),
                iterations=args.iters,
                learning_rate=args.lr,
                leaky_slope=args.leaky_slope,
                perturb_node=args.perturb_node,
                perturb_factor=args.perturb_factor,
                delta_min=args.delta_min,
                delta_max=args.delta_max,
                delta_step=args.delta_step,
                max_motif_size=args.max_motif_size,
                top_k=args.top_k,
            )
            run(config)
            print(f"wrote artifacts to {config.output_dir}")
            return 0
        summary_path = Path(args.summary)
        if not summary_path.exists():
            print(f"error: summary file not found: {summary_path}", file=sys.stderr)
            return 1
        summary = json.loads(summary_path.read_text())
        report = concordance_from_summary(summary, args.top_k)
        print(json.dumps(concordance_to_dict(report), indent=2, sort_keys=True))
        return 0
    except NetinstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
