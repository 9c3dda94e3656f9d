"""Command line interface."""

from __future__ import annotations

import argparse
import sys

from .driver import ConfigError, RunConfig, emit_report, run_fsm
from .graph import GraphParseError, GraphValidationError


def build_parser():
    p = argparse.ArgumentParser(
        prog="fsmine",
        description="Mine frequent size-s subgraph patterns from a labeled graph.")
    p.add_argument("--graph", required=True, help="edge list file ('u v' lines)")
    lab = p.add_mutually_exclusive_group()
    lab.add_argument("--labels", help="label file ('v label' lines)")
    lab.add_argument("--random-labels", type=int, metavar="N",
                     help="assign N uniform random labels")
    p.add_argument("--label-seed", type=int, default=0,
                   help="seed for --random-labels (default 0)")
    p.add_argument("--size", type=int, required=True, help="pattern size s")
    p.add_argument("--support", required=True,
                   help="threshold: integer, '0.001n' (fraction of |V|), or '0.5%%'")
    p.add_argument("--mode", choices=("two-vertex", "single-vertex"),
                   default="two-vertex")
    p.add_argument("--induce", choices=("edge", "vertex"), default="edge")
    p.add_argument("--match-sample", type=int, metavar="T",
                   help="sample at most T size-3 subgraphs per vertex")
    p.add_argument("--join-sample", type=int, metavar="X",
                   help="sample X edges / X^2 size-3 subgraphs per key group")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-prune", action="store_true",
                   help="disable anti-monotone pruning inside the join")
    p.add_argument("--quick-pattern", choices=("index", "edgelist"),
                   default="index",
                   help="grouping fingerprint (edgelist reproduces the "
                        "edge-list technique of earlier systems)")
    p.add_argument("--match-cache", metavar="PATH",
                   help="binary cache for the size-3 list (loaded if present)")
    p.add_argument("--out", default="fsmine_report",
                   help="output base name for the report files")
    p.add_argument("--format", choices=("text", "json", "both"), default="both")
    p.add_argument("--stats", metavar="PATH",
                   help="write counters and timings to this JSON file")
    p.add_argument("--figures", metavar="DIR",
                   help="render report figures into this directory")
    p.add_argument("--quiet", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = RunConfig(
        graph=args.graph,
        size=args.size,
        support=args.support,
        labels=args.labels,
        random_labels=args.random_labels,
        label_seed=args.label_seed,
        mode=args.mode,
        induce=args.induce,
        match_sample=args.match_sample,
        join_sample=args.join_sample,
        seed=args.seed,
        threads=args.threads,
        prune=not args.no_prune,
        quick_pattern=args.quick_pattern,
        match_cache=args.match_cache,
    )
    try:
        report = run_fsm(config)
    except (ConfigError, GraphParseError, GraphValidationError, OSError) as exc:
        print(f"fsmine: error: {exc}", file=sys.stderr)
        return 2
    paths = emit_report(report, args.out, fmt=args.format,
                        stats_path=args.stats, figures_dir=args.figures)
    if not args.quiet:
        print(f"graph: {report.vertex_count} vertices, {report.edge_count} edges")
        print(f"threshold: {report.threshold}  "
              f"frequent size-{args.size} patterns: {len(report.patterns)}")
        for line in list(report.row_lines())[:11]:
            print("  " + line)
        if len(report.patterns) > 10:
            print(f"  ... {len(report.patterns) - 10} more rows in the report")
        t = report.timings
        print(f"timings: match {t['match_seconds']:.3f}s (excluded from join), "
              f"join {t['join_seconds']:.3f}s, "
              f"aggregate {t['aggregate_seconds']:.3f}s")
        for path in paths:
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
