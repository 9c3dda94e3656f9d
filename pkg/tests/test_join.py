import itertools
import random
from collections import Counter

import pytest

from fsmine.canonical import pair_index, canonicalize, PatternGraph
from fsmine.graph import LabeledGraph
from fsmine.join import (JoinConfigError, JoinPlan, combine_embeddings,
                         dissect, make_plan, multiway_join,
                         quick_pattern_tuple, size3_encoding)
from fsmine.matcher import build_edge_list, enumerate_size3
from fsmine import oracle

from conftest import edge_set_of, join_subgraphs, random_graph


def mask_for(verts, edges):
    m = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    em = 0
    for u, v in edges:
        em |= 1 << pair_index(pos[u], pos[v], m)
    return em


# ---------------------------------------------------------------- dissect

def test_dissect_five_vertex_example():
    # spanning from 2 takes 3 then 4; connector 3 joins the rest
    verts = (2, 3, 4, 5, 7)
    em = mask_for(verts, [(2, 3), (3, 4), (3, 5), (3, 7), (4, 5)])
    assert dissect(verts, em, 3) == (frozenset({2, 3, 4}), frozenset({3, 5, 7}))


def test_dissect_37485_example():
    verts = (3, 7, 4, 8, 5)
    em = mask_for(verts, [(3, 7), (3, 4), (3, 8), (3, 5), (4, 5), (4, 8)])
    assert dissect(verts, em, 3) == (frozenset({3, 4, 5}), frozenset({3, 7, 8}))


def test_dissect_path_n2():
    verts = (0, 1, 2, 3)
    em = mask_for(verts, [(0, 1), (1, 2), (2, 3)])
    # all connected (2,3)-splits sharing one vertex, checked by hand:
    # greedy from 0 takes 1; remainder {2,3}+1 is connected
    assert dissect(verts, em, 2) == (frozenset({0, 1}), frozenset({1, 2, 3}))


def test_dissect_tuple_order_irrelevant():
    em1 = mask_for((2, 3, 4, 5, 7), [(2, 3), (3, 4), (3, 5), (3, 7), (4, 5)])
    em2 = mask_for((7, 5, 4, 3, 2), [(2, 3), (3, 4), (3, 5), (3, 7), (4, 5)])
    assert dissect((2, 3, 4, 5, 7), em1, 3) == dissect((7, 5, 4, 3, 2), em2, 3)


def test_dissect_double_star_uses_fallback():
    # greedy spans strand the remainder from every start; the deterministic
    # fallback must still find the unique valid split
    verts = (0, 1, 3, 4, 5, 6)
    em = mask_for(verts, [(0, 1), (0, 5), (0, 6), (1, 3), (1, 4)])
    got = dissect(verts, em, 3)
    assert got is not None
    l, r = got
    assert l in ({0, 5, 6}, {1, 3, 4})
    assert len(l & r) == 1
    assert l | r == set(verts)


def test_dissect_uniqueness_on_random_subgraphs(small_graphs):
    """Exactly one connected split passes the acceptance test per (s', n)."""
    rng = random.Random(1)
    for g in small_graphs[:6]:
        for s in (4, 5):
            subs = oracle.enumerate_subgraphs(g, s, "edge")
            for vset, eset in rng.sample(subs, min(len(subs), 25)):
                verts = tuple(sorted(vset))
                em = mask_for(verts, eset)
                for n in (2, 3):
                    split = dissect(verts, em, n)
                    assert split is not None
                    passing = 0
                    for l in itertools.combinations(sorted(vset), n):
                        lset = frozenset(l)
                        linner = {e for e in eset if set(e) <= lset}
                        for vp in sorted(l):
                            rset = (vset - lset) | {vp}
                            rinner = {e for e in eset if set(e) <= rset}
                            if _connected(lset, linner) and _connected(rset, rinner):
                                if (lset, rset) == split:
                                    passing += 1
                    assert passing == 1


def _connected(vset, eset):
    if not vset:
        return False
    vs = set(vset)
    seen = {next(iter(vs))}
    frontier = [next(iter(seen))]
    adj = {}
    for u, v in eset:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    while frontier:
        for w in adj.get(frontier.pop(), ()):
            if w in vs and w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen == vs


def test_dissect_operation_bound(small_graphs):
    """Instrumented step count stays within a cubic envelope."""
    worst = 0.0
    for g in small_graphs[:6]:
        for s in (4, 5, 6):
            for vset, eset in oracle.enumerate_subgraphs(g, s, "edge")[:200]:
                verts = tuple(sorted(vset))
                em = mask_for(verts, eset)
                for n in (2, 3):
                    ops = []
                    dissect(verts, em, n, ops=ops)
                    worst = max(worst, ops[0] / len(verts) ** 3)
    assert worst <= 12.0, f"dissect step constant blew up: {worst:.2f}"


# ---------------------------------------------------------------- combine

def fig1_graph():
    """Star at 3 over {2,4,5,7,8} plus the cross edges 4-5, 2-8, 4-8, 2-5."""
    return LabeledGraph.from_edges(
        [(3, 2), (3, 4), (3, 5), (3, 7), (3, 8), (4, 5), (2, 8), (4, 8), (2, 5)],
        vertex_count=9)


def figure_wedge_list(g):
    sl = enumerate_size3(g)
    figure = {(3, 2, 4), (3, 2, 5), (3, 4, 7), (3, 5, 7), (3, 5, 8), (3, 7, 8)}
    keep = [i for i, e in enumerate(sl.embeddings) if tuple(e) in figure]
    return sl.keep(keep)


def test_combine_produces_34275():
    """Joining the '342' and '375' wedges on key 3 yields the five-vertex
    subgraph {2,3,4,5,7}; the dissection accepts the orientation whose t
    side is the smallest-spanning part {2,3,4}."""
    g = fig1_graph()
    wl = figure_wedge_list(g)
    plan = JoinPlan(5, [wl, wl])
    groups, qpd, stats = multiway_join(plan, g, verify="all")
    by_vset = {}
    for acc in groups.values():
        for verts, mask in acc.members:
            by_vset.setdefault(frozenset(verts), []).append((verts, mask))
    target = frozenset({2, 3, 4, 5, 7})
    assert target in by_vset
    variants = by_vset[target]
    # the paper's drawing: wedge edges at 3 plus the single cross edge 4-5
    want = frozenset({(2, 3), (3, 4), (3, 5), (3, 7), (4, 5)})
    assert want in {edge_set_of(v, m) for v, m in variants}
    # every accepted tuple passes the dissection with t = {2,3,4}
    for verts, mask in variants:
        assert dissect(verts, mask, 3)[0] == {2, 3, 4}


def test_combine_rejects_37485_pair():
    """'374' joined with '385' fails the dissection check: the smallest
    dissection of that subgraph is '345' + '387'."""
    g = fig1_graph()
    wl = figure_wedge_list(g)
    plan = JoinPlan(5, [wl, wl])
    groups, qpd, stats = multiway_join(plan, g, verify="all")
    # {3,4,5,7,8} subgraphs exist only with t side {3,4,5}
    for acc in groups.values():
        for verts, mask in acc.members:
            if frozenset(verts) == frozenset({3, 4, 5, 7, 8}):
                l, r = dissect(verts, mask, 3)
                assert l == {3, 4, 5}
                assert r == {3, 7, 8}


def test_figure_join_produces_exactly_four_vertex_sets():
    g = fig1_graph()
    wl = figure_wedge_list(g)
    groups, qpd, stats = multiway_join(JoinPlan(5, [wl, wl]), g, verify="all")
    vsets = set()
    for acc in groups.values():
        for verts, mask in acc.members:
            vsets.add(frozenset(verts))
    assert vsets == {
        frozenset({2, 3, 4, 5, 7}),
        frozenset({2, 3, 4, 5, 8}),
        frozenset({2, 3, 4, 7, 8}),
        frozenset({2, 3, 5, 7, 8}),
    }


def test_quick_pattern_tuples_from_fig1():
    assert quick_pattern_tuple((3, 4, 2), (3, 7, 5), 3, [(4, 5)], 0, 0) == (0, 0, 0, 32)
    assert quick_pattern_tuple((3, 4, 2), (3, 8, 7), 3, [(2, 8)], 0, 0) == (0, 0, 0, 128)
    assert quick_pattern_tuple((3, 5, 2), (3, 8, 7), 3, [(2, 8)], 0, 0) == (0, 0, 0, 128)
    assert quick_pattern_tuple((3, 4, 2), (3, 8, 5), 3, [(4, 8), (2, 5)], 0, 0) == \
        (0, 0, 0, 272)


def test_quick_pattern_ids_dense_and_stable():
    g = fig1_graph()
    wl = figure_wedge_list(g)
    groups, qpd, stats = multiway_join(JoinPlan(5, [wl, wl]), g)
    assert sorted(groups) == list(range(len(groups)))
    seen_4tuples = {t[1:] for t in qpd.tuples}
    assert (0, 0, 0, 32) in seen_4tuples
    assert (0, 0, 0, 272) in seen_4tuples


def test_pruning_rejects_infrequent_triangle_around_joining_point():
    """A cross edge that closes a triangle around the joining point gets
    that candidate discarded once the triangle is infrequent."""
    g = LabeledGraph.from_edges(
        [(0, 1), (0, 2), (2, 3), (3, 4), (0, 3)], labels=(0, 1, 2, 3, 4))
    wedge_012 = mask_for((0, 1, 2), [(0, 1), (0, 2)])
    wedge_304 = mask_for((3, 0, 4), [(3, 0), (3, 4)])
    tri_023 = size3_encoding(g.labels[2], g.labels[0], g.labels[3], True)
    all_pairs = {(min(g.labels[a], g.labels[b]), max(g.labels[a], g.labels[b]))
                 for a in range(5) for b in range(5)}

    # the smallest dissection of the '01234' union puts '012' on the t
    # side, so the (s='012', t='234') orientation yields nothing at all
    assert combine_embeddings(
        g, (0, 1, 2), wedge_012, (3, 2, 4), wedge_304, 2) == []

    # accepted producer: s = wedge '304', t = wedge '012', key 0; the one
    # cross candidate 2-3 closes the triangle {0,2,3} at the joining point
    args = (g, (3, 0, 4), wedge_304, (0, 1, 2), wedge_012, 0)
    unpruned = combine_embeddings(*args)
    assert len(unpruned) == 2
    frequent3 = {size3_encoding(g.labels[a], g.labels[b], g.labels[c], closed)
                 for a in range(5) for b in range(5) for c in range(5)
                 for closed in (False, True)
                 if len({a, b, c}) == 3} - {tri_023}
    pruned = combine_embeddings(*args, frequent3=frequent3,
                                frequent2=all_pairs)
    # the triangle-closing combination is gone; the open one survives
    assert len(pruned) == 1
    assert all((2, 3) not in edge_set_of(v, m) for v, m, _ in pruned)
    # with the wedge (0;2,3) also infrequent, everything is pruned
    wedge_023 = size3_encoding(g.labels[0], g.labels[2], g.labels[3], False)
    nothing = combine_embeddings(*args, frequent3=frequent3 - {wedge_023},
                                 frequent2=all_pairs)
    assert nothing == []
    # banning the cross edge's label pair has the same effect on the
    # closed variant
    no_cross_pair = combine_embeddings(*args, frequent2=all_pairs -
                                       {(g.labels[2], g.labels[3])})
    assert len(no_cross_pair) == 1


def test_completeness_and_duplicate_freeness(small_graphs):
    for g in small_graphs[:8]:
        for s in (4, 5):
            got, stats = join_subgraphs(g, s)
            want = oracle.enumerate_subgraphs(g, s, "edge")
            assert Counter(got) == Counter(want)
            assert stats.outputs == len(want)


def test_single_vertex_mode_matches_oracle(small_graphs):
    for g in small_graphs[:5]:
        got, _ = join_subgraphs(g, 4, mode="single-vertex")
        want = oracle.enumerate_subgraphs(g, 4, "edge")
        assert Counter(got) == Counter(want)


def test_vertex_induced_join_matches_oracle(small_graphs):
    for g in small_graphs[:5]:
        got, _ = join_subgraphs(g, 4, induce="vertex")
        want = oracle.enumerate_subgraphs(g, 4, "vertex")
        assert Counter(got) == Counter(want)


def test_worker_counts_preserve_outputs(small_graphs):
    g = small_graphs[0]
    base, stats1 = join_subgraphs(g, 5, workers=1)
    for w in (2, 3):
        got, stats_w = join_subgraphs(g, 5, workers=w)
        assert Counter(got) == Counter(base)
        assert stats_w.hash_probe_bytes == stats1.hash_probe_bytes
        assert stats_w.combine_calls == stats1.combine_calls


def test_sampled_join_is_subset(small_graphs):
    g = small_graphs[1]
    full, _ = join_subgraphs(g, 5)
    full_set = set(full)
    for x in (1, 2, 4):
        for seed in (0, 1, 7):
            sampled, stats = join_subgraphs(g, 5, join_sample=x, seed=seed)
            assert set(sampled) <= full_set
            assert len(set(sampled)) == len(sampled)
    # quota monotone: larger x explores a superset (prefix sampling)
    prev = set()
    for x in (1, 2, 4, 8):
        cur = set(join_subgraphs(g, 5, join_sample=x, seed=3)[0])
        assert prev <= cur
        prev = cur


def test_quick_pattern_groups_are_isomorphic(small_graphs):
    for g in small_graphs[:6]:
        el = build_edge_list(g)
        s3 = enumerate_size3(g)
        plan = make_plan(4, "two-vertex", el, s3)
        groups, _, _ = multiway_join(plan, g, verify="all")
        for acc in groups.values():
            rep = PatternGraph(4, acc.rep_edge_mask,
                               tuple(g.labels[v] for v in acc.rep_vertices))
            enc = canonicalize(rep).encoding
            for verts, mask in acc.members:
                member = PatternGraph(4, mask, tuple(g.labels[v] for v in verts))
                assert canonicalize(member).encoding == enc


def test_plan_validation():
    g = LabeledGraph.from_edges([(0, 1), (1, 2)])
    el = build_edge_list(g)
    s3 = enumerate_size3(g)
    with pytest.raises(JoinConfigError):
        JoinPlan(6, [s3, s3]).validate()
    plan = make_plan(7, "two-vertex", el, s3)
    assert [sl.arity for sl in plan.lists] == [3, 3, 3]
    plan = make_plan(6, "two-vertex", el, s3)
    assert [sl.arity for sl in plan.lists] == [2, 3, 3]
    plan = make_plan(5, "single-vertex", el)
    assert [sl.arity for sl in plan.lists] == [2, 2, 2, 2]


def test_empty_second_list():
    g = LabeledGraph.from_edges([(0, 1)])
    el = build_edge_list(g)
    s3 = enumerate_size3(g)   # empty: no vertex has two neighbors
    plan = JoinPlan(4, [el, s3])
    groups, qpd, stats = multiway_join(plan, g)
    assert not groups
    assert stats.outputs == 0
    assert stats.combine_calls == 0
