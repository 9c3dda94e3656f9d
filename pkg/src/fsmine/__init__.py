"""Frequent subgraph mining on a single labeled graph.

Pattern discovery works by multi-way joining of small subgraph lists:
size-3 subgraphs (and edges) are matched once, filtered by MNI support,
and joined two vertices at a time up to the target size, with
smallest-vertex-first dissection removing duplicate discoveries and
index-based quick patterns grouping outputs ahead of canonicalization.
"""

from .canonical import CanonicalForm, PatternGraph, canonicalize, is_isomorphic
from .driver import RunConfig, RunReport, emit_report, run_fsm
from .graph import LabeledGraph, has_edge, load_graph, save_graph
from .join import JoinPlan, dissect, make_plan, multiway_join, quick_pattern_tuple
from .matcher import Embedding, SubgraphList, build_edge_list, enumerate_size3
from .oracle import enumerate_subgraphs, oracle_fsm
from .support import PatternStats, aggregate, filter_frequent

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm", "PatternGraph", "canonicalize", "is_isomorphic",
    "RunConfig", "RunReport", "emit_report", "run_fsm",
    "LabeledGraph", "has_edge", "load_graph", "save_graph",
    "JoinPlan", "dissect", "make_plan", "multiway_join", "quick_pattern_tuple",
    "Embedding", "SubgraphList", "build_edge_list", "enumerate_size3",
    "enumerate_subgraphs", "oracle_fsm",
    "PatternStats", "aggregate", "filter_frequent",
]
