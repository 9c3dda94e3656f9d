import random

import pytest

from fsmine.graph import (GraphParseError, GraphValidationError, LabeledGraph,
                          has_edge, load_graph, oriented_edges, save_graph)

from conftest import random_graph


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_path_graph(tmp_path):
    g = load_graph(write(tmp_path, "g.txt", "0 1\n1 2\n"))
    assert g.vertex_count == 3
    assert g.adjacency[1] == (0, 2)
    assert g.labels == (0, 0, 0)
    assert g.validate()


def test_self_loops_and_duplicates_dropped(tmp_path):
    g = load_graph(write(tmp_path, "g.txt", "0 0\n0 1\n1 0\n0 1\n1 2\n"))
    assert g.edge_count == 2
    assert g.adjacency[0] == (1,)


def test_directed_input_symmetrized(tmp_path):
    g = load_graph(write(tmp_path, "g.txt", "2 0\n"))
    assert has_edge(g, 0, 2) and has_edge(g, 2, 0)


def test_malformed_line_reports_lineno(tmp_path):
    path = write(tmp_path, "g.txt", "0 1\n1 two\n")
    with pytest.raises(GraphParseError, match=":2"):
        load_graph(path)
    path = write(tmp_path, "g2.txt", "0 1\n3\n")
    with pytest.raises(GraphParseError, match=":2"):
        load_graph(path)


def test_label_file(tmp_path):
    g = load_graph(write(tmp_path, "g.txt", "0 1\n1 2\n"),
                   label_file=write(tmp_path, "l.txt", "0 5\n1 7\n2 5\n"))
    assert g.labels == (5, 7, 5)


def test_label_file_missing_vertex(tmp_path):
    edge = write(tmp_path, "g.txt", "0 1\n1 2\n")
    labels = write(tmp_path, "l.txt", "0 5\n2 5\n")
    with pytest.raises(GraphValidationError, match="vertex 1"):
        load_graph(edge, label_file=labels)


def test_random_labels_deterministic(tmp_path):
    edge = write(tmp_path, "g.txt", "0 1\n1 2\n2 3\n")
    a = load_graph(edge, label_seed=9, label_count=4)
    b = load_graph(edge, label_seed=9, label_count=4)
    c = load_graph(edge, label_seed=10, label_count=4)
    assert a.labels == b.labels
    assert all(0 <= lab < 4 for lab in a.labels)
    assert a.labels != c.labels  # overwhelmingly likely under different seeds


def test_citeseer_scale_counts_match(tmp_path):
    # same vertex/edge scale as the CiteSeer citation graph (3264 / 4536)
    rng = random.Random(31)
    n, target = 3264, 4536
    edges = set()
    while len(edges) < target:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    lines = "".join(f"{u} {v}\n" for u, v in sorted(edges))
    g = load_graph(write(tmp_path, "ci.txt", lines + f"{n-1} 0\n"))
    assert g.vertex_count == 3264
    assert g.edge_count == 4536 + (0 if (0, n - 1) in edges else 1)


def test_has_edge_agrees_with_scan():
    rng = random.Random(5)
    g = random_graph(rng, 12, 20, label_count=2)
    for u in range(g.vertex_count):
        row = set(g.adjacency[u])
        for v in range(g.vertex_count):
            assert has_edge(g, u, v) == (v in row)


def test_degree_sum_is_twice_edges():
    rng = random.Random(6)
    for _ in range(5):
        g = random_graph(rng, rng.randint(4, 16), rng.randint(3, 28))
        assert sum(g.degree(v) for v in range(g.vertex_count)) == 2 * g.edge_count


def test_save_load_roundtrip(tmp_path):
    rng = random.Random(7)
    g = random_graph(rng, 10, 17, label_count=3)
    ef, lf = str(tmp_path / "e.txt"), str(tmp_path / "l.txt")
    save_graph(g, ef, lf)
    h = load_graph(ef, label_file=lf)
    assert h.vertex_count == g.vertex_count
    assert h.adjacency == g.adjacency
    assert h.labels == g.labels


def test_oriented_edges_cover_both_directions():
    g = LabeledGraph.from_edges([(0, 1), (1, 2)])
    assert sorted(oriented_edges(g)) == [(0, 1), (1, 0), (1, 2), (2, 1)]
