"""Canonical labeling and isomorphism testing for small labeled patterns.

A pattern is a connected labeled graph on k vertices (k bounded by
SIZE_LIMIT).  Its canonical form is the lexicographic minimum, over all
vertex permutations, of the pair (label sequence, upper-triangle adjacency
bit string).  Two patterns are isomorphic exactly when their canonical
encodings are equal.

All functions here are pure; results are memoized by pattern content, so
concurrent callers need no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass

SIZE_LIMIT = 10


class PatternSizeError(ValueError):
    """Pattern exceeds the supported size for canonicalization."""


def pair_index(i: int, j: int, k: int) -> int:
    """Row-major upper-triangle index of the unordered pair {i, j}, i != j."""
    if i > j:
        i, j = j, i
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


def pair_count(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True)
class PatternGraph:
    """Labeled graph template: k vertices, edge bitarray, per-vertex labels."""
    size: int
    edge_mask: int              # bit pair_index(i, j, size) set iff {i,j} is an edge
    labels: tuple

    @staticmethod
    def from_edges(size, edges, labels=None):
        mask = 0
        for i, j in edges:
            mask |= 1 << pair_index(i, j, size)
        if labels is None:
            labels = (0,) * size
        return PatternGraph(size, mask, tuple(labels))

    def has_edge(self, i, j):
        return (self.edge_mask >> pair_index(i, j, self.size)) & 1 == 1

    def edges(self):
        for i in range(self.size):
            for j in range(i + 1, self.size):
                if self.has_edge(i, j):
                    yield (i, j)

    def degree(self, i):
        return sum(1 for j in range(self.size) if j != i and self.has_edge(i, j))

    def adjacency(self):
        adj = [[] for _ in range(self.size)]
        for i, j in self.edges():
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def is_connected(self):
        if self.size == 0:
            return False
        if self.size == 1:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.size

    def permuted(self, perm):
        """Relabel: position i moves to perm[i]."""
        k = self.size
        labels = [0] * k
        for i, lab in enumerate(self.labels):
            labels[perm[i]] = lab
        mask = 0
        for i, j in self.edges():
            mask |= 1 << pair_index(perm[i], perm[j], k)
        return PatternGraph(k, mask, tuple(labels))


@dataclass(frozen=True)
class CanonicalForm:
    encoding: bytes             # byte 0 = k, labels in canonical order, packed bits
    canonical_order: tuple      # original position -> canonical position

    @property
    def hex(self):
        return self.encoding.hex()

    @property
    def size(self):
        return self.encoding[0]


def _pack_bits(bits):
    """MSB-first packing, so byte-wise compare equals bit-wise compare."""
    out = bytearray((len(bits) + 7) // 8)
    for i, b in enumerate(bits):
        if b:
            out[i >> 3] |= 1 << (7 - (i & 7))
    return bytes(out)


def _encode(k, labels, bits):
    if any(lab < 0 or lab > 255 for lab in labels):
        raise PatternSizeError("labels must fit in one byte")
    return bytes([k]) + bytes(labels) + _pack_bits(bits)


_canon_cache: dict = {}
_orbit_cache: dict = {}


def canonicalize(p: PatternGraph) -> CanonicalForm:
    """Minimal (label sequence, adjacency bits) over all vertex permutations.

    The search places canonical positions left to right, restricted to
    permutations whose label sequence is sorted (any other sequence is
    lexicographically larger), and prunes on the contiguous determined
    prefix of the bit string.  Deterministic: among automorphic orderings
    the first permutation in backtracking order wins.
    """
    key = (p.size, p.edge_mask, p.labels)
    cached = _canon_cache.get(key)
    if cached is not None:
        return cached
    k = p.size
    if k > SIZE_LIMIT:
        raise PatternSizeError(f"pattern size {k} exceeds limit {SIZE_LIMIT}")
    if k == 0:
        raise PatternSizeError("empty pattern")

    sorted_labels = tuple(sorted(p.labels))
    # vertices grouped by label, each group in ascending original position
    by_label = {}
    for v in range(k):
        by_label.setdefault(p.labels[v], []).append(v)

    adjbit = [[False] * k for _ in range(k)]
    for i, j in p.edges():
        adjbit[i][j] = adjbit[j][i] = True

    npairs = pair_count(k)
    best_bits = None
    best_perm = None            # canonical position -> original vertex

    order = [0] * k
    used = [False] * k
    # bits[pair_index(q, r, k)] for placed q < r
    bits = [False] * npairs

    def place(pos):
        nonlocal best_bits, best_perm
        if pos == k:
            if best_bits is None or bits < best_bits:
                best_bits = bits.copy()
                best_perm = order.copy()
            return
        for v in by_label[sorted_labels[pos]]:
            if used[v]:
                continue
            for q in range(pos):
                bits[pair_index(q, pos, k)] = adjbit[order[q]][v]
            # row 0 of the candidate (indices [0, pos)) is now final; prune
            if best_bits is not None and pos >= 1:
                row0 = bits[:pos]
                brow0 = best_bits[:pos]
                if row0 > brow0:
                    continue
            used[v] = True
            order[pos] = v
            place(pos + 1)
            used[v] = False

    place(0)
    canonical_order = [0] * k
    for pos, v in enumerate(best_perm):
        canonical_order[v] = pos
    form = CanonicalForm(_encode(k, sorted_labels, best_bits), tuple(canonical_order))
    _canon_cache[key] = form
    return form


def is_isomorphic(a: PatternGraph, b: PatternGraph) -> bool:
    """Label-preserving, edge-preserving bijection exists."""
    if a.size != b.size:
        return False
    if sorted(a.labels) != sorted(b.labels):
        return False
    if bin(a.edge_mask).count("1") != bin(b.edge_mask).count("1"):
        return False
    return canonicalize(a).encoding == canonicalize(b).encoding


def automorphism_orbits(form: CanonicalForm) -> tuple:
    """Orbit id per canonical position under the pattern's automorphisms.

    Backtracking over label/degree-compatible position maps of the
    canonical pattern; orbit ids are the minimum position in each orbit.
    Cached by encoding.
    """
    cached = _orbit_cache.get(form.encoding)
    if cached is not None:
        return cached
    k = form.encoding[0]
    labels = tuple(form.encoding[1:1 + k])
    bits = form.encoding[1 + k:]

    def bit(i, j):
        idx = pair_index(i, j, k)
        return (bits[idx >> 3] >> (7 - (idx & 7))) & 1

    adj = [[bit(i, j) if i != j else 0 for j in range(k)] for i in range(k)]
    deg = [sum(row) for row in adj]

    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    mapping = [-1] * k
    inverse = [-1] * k

    def extend(pos):
        if pos == k:
            for i in range(k):
                union(i, mapping[i])
            return
        for img in range(k):
            if inverse[img] != -1:
                continue
            if labels[img] != labels[pos] or deg[img] != deg[pos]:
                continue
            if any(adj[pos][q] != adj[img][mapping[q]] for q in range(pos)):
                continue
            mapping[pos] = img
            inverse[img] = pos
            extend(pos + 1)
            inverse[img] = -1
        mapping[pos] = -1

    extend(0)
    orbits = tuple(find(i) for i in range(k))
    _orbit_cache[form.encoding] = orbits
    return orbits
