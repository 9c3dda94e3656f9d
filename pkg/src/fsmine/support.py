"""Pattern aggregation, MNI support, and frequency filtering (steps 2 and 4).

Embeddings arrive pre-grouped by quick pattern (or by matcher pattern
index), so one canonicalization per group suffices.  Each group's
per-position vertex sets are remapped through the representative's
canonical order into canonical-position domains; groups with equal
canonical form merge domains by set union.

Domains are then closed under the pattern's automorphism orbits, which
makes them independent of the tuple order each group happened to use:
an embedding contributes one vertex per isomorphism of the pattern onto
it, not per arbitrary alignment choice.  MNI support is the minimum domain
size over canonical positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import (CanonicalForm, PatternGraph, automorphism_orbits,
                        canonicalize)
from .graph import LabeledGraph
from .join import GroupAcc
from .matcher import SubgraphList


class AggregationError(AssertionError):
    """A quick-pattern group contained non-isomorphic members (soundness bug)."""


@dataclass
class PatternStats:
    canonical: CanonicalForm
    domains: list               # per canonical position, orbit-closed vertex sets
    support: int = 0
    count: int = 0              # embeddings aggregated
    qp_ids: list = field(default_factory=list)

    @property
    def size(self):
        return self.canonical.size


def groups_from_list(sl: SubgraphList):
    """Step-2 grouping of a matcher list: one group per pattern index."""
    groups = {}
    for pos, verts in enumerate(sl.embeddings):
        idx = sl.pattern_ids[pos]
        acc = groups.get(idx)
        if acc is None:
            acc = GroupAcc(verts, sl.patterns[idx].edge_mask)
            groups[idx] = acc
        acc.add(verts, sl.patterns[idx].edge_mask)
    return groups


def aggregate(groups, g: LabeledGraph, verify=False):
    """Aggregate quick-pattern groups into per-canonical-form statistics.

    Returns (stats, canonicalization_calls) where stats maps a canonical
    encoding to PatternStats.  Exactly one canonicalization is spent per
    group; verify=True additionally checks retained group members against
    the representative (test aid).
    """
    stats = {}
    calls = 0
    for key, acc in groups.items():   # insertion order is deterministic
        k = len(acc.rep_vertices)
        rep = PatternGraph(k, acc.rep_edge_mask,
                           tuple(g.labels[v] for v in acc.rep_vertices))
        form = canonicalize(rep)
        calls += 1
        if verify and acc.members:
            for verts, mask in acc.members:
                member = PatternGraph(k, mask, tuple(g.labels[v] for v in verts))
                if canonicalize(member).encoding != form.encoding:
                    raise AggregationError(
                        f"group {key!r}: member {verts} not isomorphic to "
                        f"representative {acc.rep_vertices}")
        ps = stats.get(form.encoding)
        if ps is None:
            ps = PatternStats(form, [set() for _ in range(k)])
            stats[form.encoding] = ps
        order = form.canonical_order
        for i, vertices in enumerate(acc.pos_sets):
            ps.domains[order[i]] |= vertices
        ps.count += acc.count
        ps.qp_ids.append(key)
    for ps in stats.values():
        orbits = automorphism_orbits(ps.canonical)
        k = len(ps.domains)
        closed = []
        for p in range(k):
            merged = set()
            for q in range(k):
                if orbits[q] == orbits[p]:
                    merged |= ps.domains[q]
            closed.append(merged)
        ps.domains = closed
        ps.support = min(len(d) for d in closed)
    return stats, calls


def filter_frequent(stats, threshold):
    """Retain patterns with support >= threshold.

    Returns (frequent, retained) where frequent maps encoding ->
    PatternStats and retained is the canonical-encoding set handed to the
    join engine for anti-monotone pruning.
    """
    frequent = {enc: ps for enc, ps in stats.items() if ps.support >= threshold}
    return frequent, set(frequent)


def drop_infrequent(sl: SubgraphList, retained, g: LabeledGraph) -> SubgraphList:
    """Remove embeddings of filtered-out patterns; rebuilds column indexes."""
    keep_pattern = [
        canonicalize(p).encoding in retained for p in sl.patterns]
    positions = [pos for pos, idx in enumerate(sl.pattern_ids) if keep_pattern[idx]]
    if len(positions) == len(sl.embeddings):
        return sl
    return sl.keep(positions)


def frequent_label_pairs(stats2):
    """Unordered label pairs of the frequent size-2 patterns.

    The canonical encoding of a size-2 pattern is (2, la, lb, bits) with
    la <= lb, so the pair can be read straight out of it.
    """
    return {(enc[1], enc[2]) for enc in stats2}
