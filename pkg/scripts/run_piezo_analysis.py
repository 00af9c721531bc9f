#!/usr/bin/env python3
"""Run all four analyses on the bundled piezo fixture and print the agreement report.

Equivalent to:
    netinstab analyze --model piezo --variant appendix --method all --out <dir>
"""
import argparse
import json

from netinstab.report import AnalysisConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="piezo_results", help="output directory")
    ap.add_argument("--variant", choices=("appendix", "printed"), default="appendix")
    ap.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    args = ap.parse_args()

    config = AnalysisConfig(
        model_path="piezo",
        variant=args.variant,
        methods=("attention", "spectral", "motifs", "nstc"),
        output_dir=args.out,
        seeds=tuple(args.seeds),
    )
    summary = run(config)

    print(f"artifacts in {args.out}/")
    att = summary["methods"]["attention"]
    print(f"representative training seed: {att['representative_seed']}")
    for method, data in summary["methods"].items():
        order = sorted(range(summary["n"]), key=lambda v: data["ranks"][v])
        print(f"{method:10s} ranking (most unstable first): {order}")
    print(json.dumps(summary["concordance"], indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
