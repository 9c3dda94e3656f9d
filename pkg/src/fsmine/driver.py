"""Pipeline orchestration: configuration, the four mining steps, reports.

A run matches size-3/size-2 subgraphs, filters them by MNI support,
multi-way joins the survivors up to the target size, aggregates, and
filters again.  All randomness is seeded, so a (config, seed) pair fully
determines the pattern report.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict

from .graph import LabeledGraph, load_graph
from .join import JoinConfigError, JoinStats, make_plan, multiway_join
from .matcher import (build_edge_list, enumerate_size3, load_subgraph_list,
                      save_subgraph_list)
from .support import (aggregate, drop_infrequent, filter_frequent,
                      frequent_label_pairs, groups_from_list)

MODES = ("two-vertex", "single-vertex")
INDUCE = ("edge", "vertex")
QP_MODES = ("index", "edgelist")


class ConfigError(ValueError):
    pass


def resolve_threshold(spec, vertex_count):
    """Absolute integer, or fraction of |V| with suffix 'n' or '%' (ceiling).

    "5" -> 5; "0.001n" -> ceil(0.001 * |V|); "0.5%" -> ceil(0.005 * |V|).
    """
    if isinstance(spec, int):
        value = spec
    elif isinstance(spec, float):
        value = math.ceil(spec * vertex_count)
    else:
        text = str(spec).strip()
        try:
            if text.endswith("%"):
                value = math.ceil(float(text[:-1]) / 100.0 * vertex_count)
            elif text.endswith("n"):
                value = math.ceil(float(text[:-1]) * vertex_count)
            else:
                value = int(text)
        except ValueError:
            raise ConfigError(f"cannot parse support threshold {spec!r}") from None
    if value < 1:
        raise ConfigError(f"support threshold must resolve to >= 1, got {value}")
    return value


@dataclass
class RunConfig:
    graph: str
    size: int
    support: object = 1
    labels: str = None
    random_labels: int = None
    label_seed: int = 0
    mode: str = "two-vertex"
    induce: str = "edge"
    match_sample: int = None
    join_sample: int = None
    seed: int = 0
    threads: int = 1
    prune: bool = True
    quick_pattern: str = "index"
    match_cache: str = None

    def validate(self):
        if self.size < 2:
            raise ConfigError("pattern size must be >= 2")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.induce not in INDUCE:
            raise ConfigError(f"induce must be one of {INDUCE}")
        if self.quick_pattern not in QP_MODES:
            raise ConfigError(f"quick-pattern mode must be one of {QP_MODES}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.match_sample is not None and self.match_sample < 1:
            raise ConfigError("match-sample must be >= 1")
        if self.join_sample is not None and self.join_sample < 1:
            raise ConfigError("join-sample must be >= 1")
        if self.labels is not None and self.random_labels is not None:
            raise ConfigError("give either a label file or --random-labels, not both")
        return self

    @property
    def pruning_active(self):
        # the single-vertex baseline has no size-3 lists to prune with
        return self.prune and self.mode == "two-vertex"


@dataclass
class RunReport:
    patterns: list              # rows (canonical_hex, size, support), sorted
    threshold: int
    vertex_count: int
    edge_count: int
    counters: dict
    timings: dict
    config: dict

    def row_lines(self):
        yield "canonical\tsize\tsupport"
        for hex_enc, size, support in self.patterns:
            yield f"{hex_enc}\t{size}\t{support}"


def _pattern_rows(stats):
    rows = [(ps.canonical.hex, ps.size, ps.support) for ps in stats.values()]
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows


def run_fsm(config: RunConfig, graph: LabeledGraph = None) -> RunReport:
    """Execute the whole pipeline; `graph` overrides loading from disk."""
    config.validate()
    if graph is None:
        graph = load_graph(config.graph,
                           label_file=config.labels,
                           label_seed=config.label_seed,
                           label_count=config.random_labels)
    threshold = resolve_threshold(config.support, graph.vertex_count)
    counters = {
        "hash_probe_bytes": 0,
        "combine_calls": 0,
        "canonicalization_calls": 0,
        "outputs": 0,
        "pruned_count": 0,
        "sampled_fraction": 0.0,
    }
    timings = {}

    # step 1: matching (treated as preprocessing, timed separately)
    t0 = time.perf_counter()
    edge_list = build_edge_list(graph)
    size3 = None
    if config.mode == "two-vertex" and config.size >= 3:
        if config.match_cache is not None:
            try:
                size3 = load_subgraph_list(config.match_cache)
            except FileNotFoundError:
                size3 = None
        if size3 is None:
            size3 = enumerate_size3(graph,
                                    sample_per_vertex=config.match_sample,
                                    seed=config.seed,
                                    induce=config.induce)
            if config.match_cache is not None:
                save_subgraph_list(size3, config.match_cache)
    timings["match_seconds"] = time.perf_counter() - t0

    # step 2: support-filter the small lists
    t0 = time.perf_counter()
    stats2, calls = aggregate(groups_from_list(edge_list), graph)
    counters["canonicalization_calls"] += calls
    frequent2_stats, retained2 = filter_frequent(stats2, threshold)
    edge_list = drop_infrequent(edge_list, retained2, graph)
    frequent2 = frequent_label_pairs(frequent2_stats)

    frequent3 = None
    stats3 = {}
    if size3 is not None:
        stats3, calls = aggregate(groups_from_list(size3), graph)
        counters["canonicalization_calls"] += calls
        frequent3_stats, retained3 = filter_frequent(stats3, threshold)
        size3 = drop_infrequent(size3, retained3, graph)
        frequent3 = retained3
    timings["filter_seconds"] = time.perf_counter() - t0

    # steps 3 and 4: join to target size, aggregate, final filter
    t0 = time.perf_counter()
    if config.size == 2:
        final_stats = frequent2_stats
        timings["join_seconds"] = 0.0
    elif config.size == 3 and config.mode == "two-vertex":
        final_stats, _ = filter_frequent(stats3, threshold)
        timings["join_seconds"] = 0.0
    else:
        plan = make_plan(config.size, config.mode, edge_list, size3,
                         induce=config.induce)
        groups, qpd, jstats = multiway_join(
            plan, graph,
            frequent3=frequent3 if config.pruning_active else None,
            frequent2=frequent2 if config.pruning_active else None,
            join_sample=config.join_sample,
            seed=config.seed,
            num_workers=config.threads,
            qp_mode=config.quick_pattern)
        timings["join_seconds"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        stats_s, calls = aggregate(groups, graph)
        counters["canonicalization_calls"] += calls
        counters["hash_probe_bytes"] += jstats.hash_probe_bytes
        counters["combine_calls"] += jstats.combine_calls
        counters["outputs"] += jstats.outputs
        counters["pruned_count"] += jstats.pruned_count
        counters["sampled_fraction"] = jstats.sampled_fraction
        final_stats, _ = filter_frequent(stats_s, threshold)
    timings["aggregate_seconds"] = time.perf_counter() - t0

    cfg = asdict(config)
    return RunReport(
        patterns=_pattern_rows(final_stats),
        threshold=threshold,
        vertex_count=graph.vertex_count,
        edge_count=graph.edge_count,
        counters=counters,
        timings=timings,
        config=cfg,
    )


def emit_report(report: RunReport, out_base, fmt="both", stats_path=None,
                figures_dir=None):
    """Write the pattern table and the machine-readable report.

    The .tsv and .json outputs are byte-identical across runs with equal
    config and seed (timings live in the separate stats file).  Returns
    the list of written paths.
    """
    paths = []
    if fmt in ("text", "both"):
        tsv = f"{out_base}.tsv"
        with open(tsv, "w", encoding="utf-8") as fh:
            for line in report.row_lines():
                fh.write(line + "\n")
        paths.append(tsv)
    if fmt in ("json", "both"):
        jsn = f"{out_base}.json"
        payload = {
            "threshold": report.threshold,
            "vertex_count": report.vertex_count,
            "edge_count": report.edge_count,
            "pattern_count": len(report.patterns),
            "patterns": [
                {"canonical": hex_enc, "size": size, "support": support}
                for hex_enc, size, support in report.patterns
            ],
            "counters": report.counters,
            "config": report.config,
        }
        with open(jsn, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        paths.append(jsn)
    if stats_path:
        with open(stats_path, "w", encoding="utf-8") as fh:
            json.dump({"counters": report.counters,
                       "timings": report.timings,
                       "threshold": report.threshold,
                       "config": report.config},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
        paths.append(stats_path)
    if figures_dir:
        from . import figures
        paths.extend(figures.render_report_figures(report, figures_dir))
    return paths
