"""Enumeration of size-3 and size-2 subgraph lists (pipeline step 1).

Size-3 subgraphs are wedges and triangles.  Each wedge is emitted once per
its center + unordered leaf pair; each triangle once, anchored at its
smallest vertex.  Embedding tuples follow their pattern template order:

  wedge    (center, leaf_a, leaf_b)   leaves ordered by (label, vertex id)
  triangle (x, y, z)                  ordered by (label, vertex id)

Ordering vertices of symmetric roles by (label, id) rather than id alone
keeps every embedding of one pattern index in the same labeled template
order, which index-based quick patterns rely on; for uniform labels it
reduces to plain id order.

The size-2 list stores both orientations of every edge; its pattern table
is keyed by the ordered label pair of the tuple.
"""

from __future__ import annotations

import pickle
import random
from dataclasses import dataclass, field

from .canonical import PatternGraph
from .graph import LabeledGraph

WEDGE_MASK = PatternGraph.from_edges(3, [(0, 1), (0, 2)]).edge_mask
TRIANGLE_MASK = PatternGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)]).edge_mask
EDGE_MASK = PatternGraph.from_edges(2, [(0, 1)]).edge_mask


@dataclass(frozen=True)
class Embedding:
    vertices: tuple
    pattern_idx: int


@dataclass
class SubgraphList:
    """Embeddings of one arity plus per-column hash indexes.

    embeddings[i] is the vertex tuple of embedding i, pattern_ids[i] its
    index into `patterns`.  column_index[c] maps a vertex id to the list of
    embedding positions whose c-th tuple entry is that vertex.
    """
    arity: int
    embeddings: list = field(default_factory=list)
    pattern_ids: list = field(default_factory=list)
    patterns: list = field(default_factory=list)
    column_index: list = field(default_factory=list)

    def __len__(self):
        return len(self.embeddings)

    def embedding(self, i):
        return Embedding(self.embeddings[i], self.pattern_ids[i])

    def build_column_index(self):
        self.column_index = [dict() for _ in range(self.arity)]
        for pos, verts in enumerate(self.embeddings):
            for c, v in enumerate(verts):
                self.column_index[c].setdefault(v, []).append(pos)
        return self

    def keep(self, positions):
        """New list with only the given embedding positions (indexes rebuilt)."""
        sub = SubgraphList(self.arity, patterns=list(self.patterns))
        for pos in positions:
            sub.embeddings.append(self.embeddings[pos])
            sub.pattern_ids.append(self.pattern_ids[pos])
        return sub.build_column_index()


class _PatternTable:
    """Dense indices for tuple-space labeled templates."""

    def __init__(self):
        self.index = {}
        self.patterns = []

    def get(self, size, edge_mask, labels):
        key = (size, edge_mask, labels)
        idx = self.index.get(key)
        if idx is None:
            idx = len(self.patterns)
            self.index[key] = idx
            self.patterns.append(PatternGraph(size, edge_mask, labels))
        return idx


def enumerate_size3(g: LabeledGraph, sample_per_vertex=None, seed=0,
                    induce="edge") -> SubgraphList:
    """All (or per-vertex sampled) size-3 subgraphs.

    For each center v and unordered neighbor pair {a, b}, emit the wedge
    (v; a, b); emit the triangle on {v, a, b} only when v < a < b and the
    closing edge exists, so every subgraph appears exactly once.  Under
    induce="vertex" a wedge is emitted only when its closing edge is
    absent.  With `sample_per_vertex` = t, each center's neighbor list is
    permuted by a generator seeded from (seed, v) and enumeration stops
    after t embeddings from that center.
    """
    out = SubgraphList(3)
    table = _PatternTable()
    labels = g.labels
    induced_only = induce == "vertex"
    for v in range(g.vertex_count):
        nbrs = g.adjacency[v]
        if len(nbrs) < 2:
            continue
        if sample_per_vertex is not None:
            rng = random.Random(f"{seed}:match:{v}")
            nbrs = list(nbrs)
            rng.shuffle(nbrs)
            quota = sample_per_vertex
        else:
            quota = None
        emitted = 0
        for ia in range(len(nbrs) - 1):
            if quota is not None and emitted >= quota:
                break
            a = nbrs[ia]
            for ib in range(ia + 1, len(nbrs)):
                if quota is not None and emitted >= quota:
                    break
                b = nbrs[ib]
                closing = b in g.neighbor_set(a)
                if not (induced_only and closing):
                    lo, hi = (a, b) if (labels[a], a) <= (labels[b], b) else (b, a)
                    idx = table.get(3, WEDGE_MASK, (labels[v], labels[lo], labels[hi]))
                    out.embeddings.append((v, lo, hi))
                    out.pattern_ids.append(idx)
                    emitted += 1
                    if quota is not None and emitted >= quota:
                        break
                if v < a and v < b and closing:
                    tri = sorted((v, a, b), key=lambda x: (labels[x], x))
                    idx = table.get(3, TRIANGLE_MASK, tuple(labels[x] for x in tri))
                    out.embeddings.append(tuple(tri))
                    out.pattern_ids.append(idx)
                    emitted += 1
    out.patterns = table.patterns
    return out.build_column_index()


def build_edge_list(g: LabeledGraph) -> SubgraphList:
    """Arity-2 list with both orientations of every edge."""
    out = SubgraphList(2)
    table = _PatternTable()
    labels = g.labels
    for u in range(g.vertex_count):
        for v in g.adjacency[u]:
            idx = table.get(2, EDGE_MASK, (labels[u], labels[v]))
            out.embeddings.append((u, v))
            out.pattern_ids.append(idx)
    out.patterns = table.patterns
    return out.build_column_index()


def save_subgraph_list(sl: SubgraphList, path):
    """Binary cache so matching can be treated as preprocessing."""
    payload = {
        "arity": sl.arity,
        "embeddings": sl.embeddings,
        "pattern_ids": sl.pattern_ids,
        "patterns": [(p.size, p.edge_mask, p.labels) for p in sl.patterns],
    }
    with open(path, "wb") as fh:
        pickle.dump(payload, fh, protocol=4)


def load_subgraph_list(path) -> SubgraphList:
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    sl = SubgraphList(payload["arity"])
    sl.embeddings = payload["embeddings"]
    sl.pattern_ids = payload["pattern_ids"]
    sl.patterns = [PatternGraph(s, m, tuple(l)) for (s, m, l) in payload["patterns"]]
    return sl.build_column_index()
