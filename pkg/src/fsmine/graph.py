"""Labeled input graph: loading, storage, and adjacency queries.

The graph is undirected, simple (no self-loops, no parallel edges) and
vertex-labeled.  Vertex ids are dense 0-based integers; neighbor lists are
kept sorted so membership tests can use binary search.  Instances are
immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field


class GraphParseError(ValueError):
    """Malformed line in an edge or label file (reported with line number)."""


class GraphValidationError(ValueError):
    """Structurally invalid input (e.g. label file missing a vertex)."""


@dataclass(frozen=True)
class LabeledGraph:
    vertex_count: int
    adjacency: tuple            # per-vertex sorted tuple of neighbor ids
    labels: tuple               # per-vertex label id
    _neighbor_sets: tuple = field(repr=False, default=())

    @staticmethod
    def from_edges(edges, labels=None, vertex_count=None):
        """Build a graph from an iterable of (u, v) pairs.

        Self-loops and duplicate edges are dropped; the edge set is
        symmetrized.  `labels` defaults to all-zero.
        """
        nbrs = {}
        max_v = -1
        for u, v in edges:
            if u < 0 or v < 0:
                raise GraphValidationError(f"negative vertex id in edge ({u}, {v})")
            max_v = max(max_v, u, v)
            if u == v:
                continue
            nbrs.setdefault(u, set()).add(v)
            nbrs.setdefault(v, set()).add(u)
        n = max(max_v + 1, vertex_count or 0)
        if labels is None:
            labels = (0,) * n
        else:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphValidationError(
                    f"label count {len(labels)} does not match vertex count {n}")
        adjacency = tuple(tuple(sorted(nbrs.get(v, ()))) for v in range(n))
        nsets = tuple(frozenset(a) for a in adjacency)
        return LabeledGraph(n, adjacency, labels, nsets)

    @property
    def edge_count(self):
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v):
        return len(self.adjacency[v])

    def neighbors(self, v):
        return self.adjacency[v]

    def label(self, v):
        return self.labels[v]

    def neighbor_set(self, v):
        return self._neighbor_sets[v]

    def edges(self):
        """Iterate undirected edges once, as (u, v) with u < v."""
        for u in range(self.vertex_count):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def validate(self):
        """Check structural invariants; raises GraphValidationError."""
        for u, adj in enumerate(self.adjacency):
            prev = -1
            for v in adj:
                if v <= prev:
                    raise GraphValidationError(f"adjacency of {u} not strictly ascending")
                prev = v
                if v == u:
                    raise GraphValidationError(f"self-loop at {u}")
                if v >= self.vertex_count:
                    raise GraphValidationError(f"neighbor {v} of {u} out of range")
                if not has_edge(self, v, u):
                    raise GraphValidationError(f"asymmetric edge ({u}, {v})")
        return True


def has_edge(g: LabeledGraph, u: int, v: int) -> bool:
    """True iff {u, v} is an edge; binary search on the sorted neighbor list."""
    adj = g.adjacency[u]
    i = bisect_left(adj, v)
    return i < len(adj) and adj[i] == v


def _parse_pairs(path, what):
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise GraphParseError(f"{path}:{lineno}: expected two fields, got {stripped!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"{path}:{lineno}: non-integer {what} entry {stripped!r}") from None
            pairs.append((a, b))
    return pairs


def random_labels(n, label_count, seed):
    """Deterministic uniform labels in [0, label_count) for n vertices."""
    rng = random.Random(seed)
    return tuple(rng.randrange(label_count) for _ in range(n))


def load_graph(edge_file, label_file=None, label_seed=None, label_count=None) -> LabeledGraph:
    """Load an undirected labeled graph from a whitespace "u v" edge list.

    Duplicate edges and self-loops are dropped; directed input is
    symmetrized.  Labels come from `label_file` ("v label" lines covering
    every vertex) when given, otherwise they are drawn uniformly from
    [0, label_count) with a generator seeded by `label_seed` (all-zero
    labels when no source is configured).
    """
    edges = _parse_pairs(edge_file, "edge")
    n = 0
    for u, v in edges:
        if u < 0 or v < 0:
            raise GraphValidationError(f"{edge_file}: negative vertex id in edge ({u}, {v})")
        n = max(n, u + 1, v + 1)

    if label_file is not None:
        assigned = {}
        for v, lab in _parse_pairs(label_file, "label"):
            if lab < 0:
                raise GraphValidationError(f"{label_file}: negative label for vertex {v}")
            assigned[v] = lab
        n = max(n, max(assigned, default=-1) + 1)
        missing = [v for v in range(n) if v not in assigned]
        if missing:
            raise GraphValidationError(
                f"{label_file}: no label for vertex {missing[0]} "
                f"({len(missing)} vertices uncovered)")
        labels = tuple(assigned[v] for v in range(n))
    elif label_count is not None:
        labels = random_labels(n, label_count, 0 if label_seed is None else label_seed)
    else:
        labels = (0,) * n
    return LabeledGraph.from_edges(edges, labels=labels, vertex_count=n)


def save_graph(g: LabeledGraph, edge_file, label_file=None):
    """Write the graph back out in the formats accepted by load_graph."""
    with open(edge_file, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
    if label_file is not None:
        with open(label_file, "w", encoding="utf-8") as fh:
            for v in range(g.vertex_count):
                fh.write(f"{v} {g.labels[v]}\n")


def oriented_edges(g: LabeledGraph):
    """Iterate every edge in both orientations (the size-2 subgraph stream)."""
    for u in range(g.vertex_count):
        for v in g.adjacency[u]:
            yield (u, v)
