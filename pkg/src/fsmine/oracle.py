"""Brute-force reference enumeration and reference FSM for tests.

Exhaustively lists connected subgraphs and recomputes MNI supports from
full embedding lists.  Deliberately independent of the join engine: only
the graph container and the canonicalizer are shared, so engine-vs-oracle
differential tests are meaningful.  Desk scale only.
"""

from __future__ import annotations

from .canonical import PatternGraph, automorphism_orbits, canonicalize, pair_index
from .graph import LabeledGraph

MAX_SIZE = 7
MAX_VERTICES = 50


class OracleScaleError(ValueError):
    """Requested enumeration exceeds the oracle's desk-scale guard."""


def _guard(g: LabeledGraph, s: int):
    if s > MAX_SIZE or g.vertex_count > MAX_VERTICES:
        raise OracleScaleError(
            f"oracle guard: size {s} <= {MAX_SIZE} and |V| {g.vertex_count} <= {MAX_VERTICES}")


def _edge_induced(g: LabeledGraph, s: int):
    """Connected edge sets spanning exactly s vertices, each exactly once.

    Grows edge sets one adjacent edge at a time; a visited set of frozen
    edge sets deduplicates the different growth orders.
    """
    results = []
    seen = set()
    all_edges = list(g.edges())

    def grow(edge_set, vset):
        key = frozenset(edge_set)
        if key in seen:
            return
        seen.add(key)
        if len(vset) == s:
            results.append((frozenset(vset), key))
        candidates = set()
        for v in vset:
            for w in g.adjacency[v]:
                e = (v, w) if v < w else (w, v)
                if e not in edge_set:
                    candidates.add(e)
        for e in candidates:
            u, w = e
            new_vset = vset | {u, w}
            if len(new_vset) <= s:
                grow(edge_set | {e}, new_vset)

    for e in all_edges:
        grow({e}, {e[0], e[1]})
    return results


def _vertex_induced(g: LabeledGraph, s: int):
    """Connected s-vertex sets, each once (exclusive-neighborhood extension:
    a new extension candidate must not already touch the growing set)."""
    results = []

    def induced_edges(vset):
        return frozenset(
            (u, v) for u in vset for v in g.adjacency[u] if u < v and v in vset)

    def extend(vset, ext, nbhd, anchor):
        if len(vset) == s:
            results.append((frozenset(vset), induced_edges(vset)))
            return
        ext = sorted(ext)
        for i, w in enumerate(ext):
            exclusive = {u for u in g.adjacency[w]
                         if u > anchor and u not in vset and u not in nbhd}
            extend(vset | {w}, set(ext[i + 1:]) | exclusive,
                   nbhd | set(g.adjacency[w]) | {w}, anchor)

    for v in range(g.vertex_count):
        ext = {w for w in g.adjacency[v] if w > v}
        extend({v}, ext, set(g.adjacency[v]) | {v}, v)
    return results


def enumerate_subgraphs(g: LabeledGraph, s: int, induce: str = "edge"):
    """All connected size-s subgraphs as (vertex frozenset, edge frozenset)."""
    _guard(g, s)
    if s < 1:
        return []
    if s == 1:
        return [(frozenset([v]), frozenset()) for v in range(g.vertex_count)]
    if induce == "edge":
        return _edge_induced(g, s)
    if induce == "vertex":
        return _vertex_induced(g, s)
    raise ValueError(f"unknown induce mode {induce!r}")


def pattern_of(g: LabeledGraph, vset, eset) -> PatternGraph:
    """Tuple-space pattern of a concrete subgraph, vertices in sorted order."""
    verts = sorted(vset)
    pos = {v: i for i, v in enumerate(verts)}
    k = len(verts)
    mask = 0
    for u, v in eset:
        mask |= 1 << pair_index(pos[u], pos[v], k)
    return PatternGraph(k, mask, tuple(g.labels[v] for v in verts))


def mni_supports(g: LabeledGraph, subgraphs):
    """Exact MNI support per canonical form from full subgraph lists.

    Domains are aggregated at canonical positions and closed under the
    pattern's automorphism orbits, i.e. embeddings count as position maps:
    every isomorphism from the pattern onto an instance contributes.
    """
    domains = {}
    for vset, eset in subgraphs:
        verts = sorted(vset)
        form = canonicalize(pattern_of(g, vset, eset))
        doms = domains.get(form.encoding)
        if doms is None:
            doms = [set() for _ in range(len(verts))]
            domains[form.encoding] = doms
        order = form.canonical_order
        for i, v in enumerate(verts):
            doms[order[i]].add(v)
    supports = {}
    for encoding, doms in domains.items():
        orbits = automorphism_orbits(_form_from_encoding(encoding))
        closed = []
        for p in range(len(doms)):
            merged = set()
            for q in range(len(doms)):
                if orbits[q] == orbits[p]:
                    merged |= doms[q]
            closed.append(merged)
        supports[encoding] = min(len(d) for d in closed)
    return supports


def _form_from_encoding(encoding):
    from .canonical import CanonicalForm
    k = encoding[0]
    return CanonicalForm(encoding, tuple(range(k)))


def oracle_fsm(g: LabeledGraph, s: int, t: int, induce: str = "edge"):
    """Mapping canonical encoding -> MNI support for patterns with support >= t."""
    _guard(g, s)
    subgraphs = enumerate_subgraphs(g, s, induce)
    supports = mni_supports(g, subgraphs)
    return {enc: sup for enc, sup in supports.items() if sup >= t}
