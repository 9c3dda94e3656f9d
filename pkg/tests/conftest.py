"""Shared helpers: seeded graph generators and engine/oracle wrappers."""

import random
from collections import Counter

import pytest

from fsmine.canonical import pair_index
from fsmine.driver import RunConfig, run_fsm
from fsmine.graph import LabeledGraph
from fsmine.join import make_plan, multiway_join
from fsmine.matcher import build_edge_list, enumerate_size3
from fsmine import oracle


def random_graph(rng, n, m, label_count=1, connected_bias=True):
    """Random simple labeled graph; a seeded spanning-tree skeleton keeps
    most instances connected so subgraph counts stay interesting."""
    edges = set()
    if connected_bias and n > 1:
        verts = list(range(n))
        rng.shuffle(verts)
        for i in range(1, n):
            u = verts[rng.randrange(i)]
            edges.add((min(u, verts[i]), max(u, verts[i])))
    all_pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rng.shuffle(all_pairs)
    for pair in all_pairs:
        if len(edges) >= m:
            break
        edges.add(pair)
    labels = [rng.randrange(label_count) for _ in range(n)]
    return LabeledGraph.from_edges(sorted(edges), labels=labels, vertex_count=n)


def powerlaw_graph(n, seed, m_attach=1, label_count=4, cap=24):
    """Preferential attachment with a degree cap (keeps hubs desk-sized)."""
    rng = random.Random(seed)
    edges = []
    targets = [0]
    deg = [0] * n
    for v in range(1, n):
        chosen = set()
        for _ in range(m_attach):
            for _ in range(50):
                u = targets[rng.randrange(len(targets))]
                if u != v and u not in chosen and deg[u] < cap:
                    break
            else:
                u = rng.randrange(v)
                if u == v or u in chosen:
                    continue
            chosen.add(u)
        for u in chosen:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
            targets.append(u)
            targets.append(v)
    labels = [rng.randrange(label_count) for _ in range(n)]
    return LabeledGraph.from_edges(edges, labels=labels, vertex_count=n)


def edge_set_of(verts, mask):
    m = len(verts)
    return frozenset(
        tuple(sorted((verts[i], verts[j])))
        for i in range(m) for j in range(i + 1, m)
        if (mask >> pair_index(i, j, m)) & 1)


def join_subgraphs(g, s, mode="two-vertex", induce="edge", workers=1,
                   join_sample=None, seed=0):
    """Raw engine outputs as (vertex set, edge set) pairs, unfiltered."""
    el = build_edge_list(g)
    s3 = enumerate_size3(g, induce=induce) if mode == "two-vertex" else None
    plan = make_plan(s, mode, el, s3, induce=induce)
    groups, qpd, stats = multiway_join(plan, g, verify="all",
                                       num_workers=workers,
                                       join_sample=join_sample, seed=seed)
    out = []
    for acc in groups.values():
        for verts, mask in acc.members:
            out.append((frozenset(verts), edge_set_of(verts, mask)))
    return out, stats


def engine_fsm(g, s, t, **kwargs):
    """Frequent patterns from the full pipeline as {(canonical_hex, support)}."""
    cfg = RunConfig(graph="<memory>", size=s, support=t, **kwargs)
    report = run_fsm(cfg, graph=g)
    return {(row[0], row[2]) for row in report.patterns}


def oracle_fsm_set(g, s, t, induce="edge"):
    return {(enc.hex(), sup)
            for enc, sup in oracle.oracle_fsm(g, s, t, induce=induce).items()}


@pytest.fixture(scope="session")
def small_graphs():
    """A couple dozen assorted labeled graphs for module-level tests."""
    rng = random.Random(2024)
    graphs = []
    for _ in range(18):
        n = rng.randint(5, 13)
        m = rng.randint(n - 1, min(n * (n - 1) // 2, 2 * n))
        graphs.append(random_graph(rng, n, m, label_count=rng.choice([1, 2, 3])))
    return graphs
