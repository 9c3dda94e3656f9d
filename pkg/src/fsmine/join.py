"""Depth-first multi-way join of subgraph lists (pipeline step 3).

Two subgraph lists are joined on every pair of columns; every valid
intermediate is then extended list by list, looking each of its vertices
up in the next list's column indexes.  A combined candidate survives only
when the smallest-vertex-first dissection of its vertex set reproduces the
two operands, which makes every output subgraph appear exactly once.

Index-based quick patterns group outputs before any canonicalization:
a combined subgraph is fingerprinted by the 4-tuple

    (left operand pattern/qp id, right pattern id, i * n2 + j, cross bits)

where the shared vertex sits at position i of the left and j of the right
operand, and cross bit (i * n2 + j) marks a kept edge between left
position i and right position j.  Chained over join steps, equal
fingerprints imply isomorphic outputs.

Anti-monotone pruning rejects a candidate as soon as the vertices around
the joining point form an infrequent size-3 pattern, or a kept cross edge
has an infrequent label pair.

Sampling truncates every per-key candidate loop to a quota (x for edge
operands, x^2 for size-3 operands) using the prefix of a permutation
seeded per (seed, loop depth, column, key); a larger quota therefore
explores a superset of a smaller one.

Workers partition the join keys; each owns a private quick-pattern
dictionary, aggregation buffers, and counters, unified by a deterministic
merge that renumbers qp ids in worker order.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .canonical import PatternGraph, canonicalize, pair_index
from .graph import LabeledGraph
from .matcher import SubgraphList, TRIANGLE_MASK, WEDGE_MASK

KEY_BYTES = 8                  # a vertex id probed into a hash table
ID_BYTES = 8                   # the pattern/qp index stored with an embedding


def embedding_bytes(arity):
    return 8 * arity + ID_BYTES


class JoinConfigError(ValueError):
    """Join plan inconsistent with the requested target size."""


@dataclass
class JoinPlan:
    target_size: int
    lists: list                 # SubgraphList refs; lists[0] joins lists[1], then the rest
    mode: str = "two-vertex"    # "two-vertex" | "single-vertex"
    induce: str = "edge"        # "edge" | "vertex"

    def validate(self):
        if len(self.lists) < 2:
            raise JoinConfigError("a join plan needs at least two lists")
        total = sum(sl.arity for sl in self.lists) - (len(self.lists) - 1)
        if total != self.target_size:
            raise JoinConfigError(
                f"list arities {[sl.arity for sl in self.lists]} reach size {total}, "
                f"not the requested {self.target_size}")
        if self.induce not in ("edge", "vertex"):
            raise JoinConfigError(f"unknown induce mode {self.induce!r}")
        return self


def make_plan(target_size, mode, edge_list, size3_list=None, induce="edge") -> JoinPlan:
    """Standard plans: odd s joins n size-3 lists, even s starts from the
    edge list; single-vertex mode chains the edge list s-1 times."""
    if target_size < 3:
        raise JoinConfigError("join plans start at target size 3")
    if mode == "single-vertex":
        lists = [edge_list] * (target_size - 1)
    elif target_size % 2 == 1:
        lists = [size3_list] * ((target_size - 1) // 2)
    else:
        lists = [edge_list] + [size3_list] * (target_size // 2 - 1)
    return JoinPlan(target_size, lists, mode=mode, induce=induce).validate()


@dataclass
class JoinStats:
    hash_probe_bytes: int = 0
    combine_calls: int = 0
    outputs: int = 0
    pruned_count: int = 0
    loop_iterations_total: int = 0
    loop_iterations_taken: int = 0

    @property
    def sampled_fraction(self):
        if self.loop_iterations_total == 0:
            return 0.0
        return 1.0 - self.loop_iterations_taken / self.loop_iterations_total

    def merge(self, other):
        self.hash_probe_bytes += other.hash_probe_bytes
        self.combine_calls += other.combine_calls
        self.outputs += other.outputs
        self.pruned_count += other.pruned_count
        self.loop_iterations_total += other.loop_iterations_total
        self.loop_iterations_taken += other.loop_iterations_taken


@dataclass
class GroupAcc:
    """Accumulated embeddings of one quick-pattern group: a representative,
    a count, and the set of graph vertices seen at each tuple position."""
    rep_vertices: tuple
    rep_edge_mask: int
    count: int = 0
    pos_sets: list = field(default_factory=list)
    members: list = field(default_factory=list)   # only kept when verifying

    def add(self, vertices, edge_mask, keep_member=False):
        if not self.pos_sets:
            self.pos_sets = [set() for _ in range(len(vertices))]
        for i, v in enumerate(vertices):
            self.pos_sets[i].add(v)
        self.count += 1
        if keep_member:
            self.members.append((vertices, edge_mask))

    def merge(self, other):
        for mine, theirs in zip(self.pos_sets, other.pos_sets):
            mine |= theirs
        self.count += other.count
        self.members.extend(other.members)


_PAIR_BIT_CACHE: dict = {}


def pair_bits(m):
    """pair_bits(m)[i][j] = bit of the unordered position pair {i, j}."""
    table = _PAIR_BIT_CACHE.get(m)
    if table is None:
        table = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                if i != j:
                    table[i][j] = 1 << pair_index(i, j, m)
        _PAIR_BIT_CACHE[m] = table
    return table


def _dissect_masks(vertices, adj, order, n, steps_out=None):
    """Core of the smallest-vertex-first dissection, over position masks.

    adj[p] is the position-bitmask adjacency within the candidate's own
    edge set; order lists positions by ascending vertex id.  Returns
    (l_mask, r_mask) or None.
    """
    m = len(vertices)
    all_mask = (1 << m) - 1
    steps = 0

    def remainder(visited):
        """r = rest + smallest vertex of l connecting it, or None."""
        nonlocal steps
        rest = all_mask & ~visited
        for vp in order:
            if not visited >> vp & 1:
                continue
            r_mask = rest | (1 << vp)
            comp = r_mask & -r_mask
            frontier = comp
            while frontier:
                nxt = 0
                for p in order:
                    if frontier >> p & 1:
                        nxt |= adj[p]
                steps += m
                frontier = nxt & r_mask & ~comp
                comp |= frontier
            if comp == r_mask:
                return r_mask
        return None

    found = None
    for start in order:
        visited = 1 << start
        frontier = adj[start] & ~visited
        count = 1
        while count < n and frontier:
            for p in order:   # smallest-id member of the frontier
                if frontier >> p & 1:
                    best = p
                    break
            steps += m
            visited |= 1 << best
            count += 1
            frontier = (frontier | adj[best]) & ~visited
        if count != n:
            continue
        r_mask = remainder(visited)
        if r_mask is not None:
            found = (visited, r_mask)
            break

    if found is None:
        # The greedy span can strand the remainder for every start even
        # though valid splits exist (two stars bridged by one edge are the
        # smallest case); fall back to the candidate l sets in ascending
        # lexicographic order of their sorted vertex ids.  Still a
        # deterministic function of (subgraph, n), which is all the
        # exactly-once join rule needs.
        for combo in combinations(order, n):
            visited = 0
            for p in combo:
                visited |= 1 << p
            comp = 1 << combo[0]
            frontier = comp
            while frontier:
                nxt = 0
                for p in order:
                    if frontier >> p & 1:
                        nxt |= adj[p]
                steps += m
                frontier = nxt & visited & ~comp
                comp |= frontier
            if comp != visited:
                continue
            r_mask = remainder(visited)
            if r_mask is not None:
                found = (visited, r_mask)
                break
    if steps_out is not None:
        steps_out.append(steps)
    return found


def dissect(vertices, edge_mask, n, ops=None):
    """Smallest-vertex-first dissection of a connected subgraph.

    Starting from each vertex in ascending id order, greedily span to the
    smallest adjacent vertex (within the subgraph's own edge set) until n
    vertices are visited; those form l.  The unvisited rest, joined with
    the smallest vertex of l that makes it connected, forms r.  The first
    (l, r) found is returned as a pair of frozensets; see _dissect_masks
    for the deterministic fallback when the greedy span finds nothing.

    `ops`, when given, receives the count of elementary steps (for the
    worst-case bound check).
    """
    m = len(vertices)
    pb = pair_bits(m)
    adj = [0] * m
    for i in range(m):
        row = pb[i]
        for j in range(i + 1, m):
            if edge_mask & row[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    order = sorted(range(m), key=lambda p: vertices[p])
    found = _dissect_masks(vertices, adj, order, n, steps_out=ops)
    if found is None:
        return None
    l_mask, r_mask = found
    l_set = frozenset(vertices[p] for p in range(m) if l_mask >> p & 1)
    r_set = frozenset(vertices[p] for p in range(m) if r_mask >> p & 1)
    return l_set, r_set


_size3_form_cache: dict = {}


def size3_encoding(lk, lb, lc, closed):
    """Canonical encoding of the wedge (k; b, c), or of the triangle on the
    same labels when the b-c edge is present."""
    key = (lk, lb, lc, closed)
    enc = _size3_form_cache.get(key)
    if enc is None:
        if closed:
            labels = tuple(sorted((lk, lb, lc)))
            mask = TRIANGLE_MASK
        else:
            labels = (lk,) + tuple(sorted((lb, lc)))
            mask = WEDGE_MASK
        enc = canonicalize(PatternGraph(3, mask, labels)).encoding
        _size3_form_cache[key] = enc
    return enc


def quick_pattern_tuple(s_verts, t_verts, k, cross_edges, left_ref, right_pat):
    """The 4-tuple fingerprint of combining s with t on k.

    cross_edges is an iterable of (u, v) pairs with u from s and v from t;
    bit i*n2+j is set when s_verts[i] connects to t_verts[j] in the result.
    """
    n2 = len(t_verts)
    i = s_verts.index(k)
    j = t_verts.index(k)
    bits = 0
    for u, v in cross_edges:
        bits |= 1 << (s_verts.index(u) * n2 + t_verts.index(v))
    return (left_ref, right_pat, i * n2 + j, bits)


class QuickPatternDictionary:
    """Injective mapping from quick-pattern tuples to dense ids.

    Keys are (depth, left, right_pat, join_pos, cross_bits); at depth 0
    `left` is a pattern index of the first list, at deeper levels the qp id
    of the intermediate, making the fingerprint a recursive chain.  The
    depth field keeps the two id spaces apart.
    """

    def __init__(self):
        self.ids = {}
        self.tuples = []

    def __len__(self):
        return len(self.tuples)

    def intern(self, key):
        qid = self.ids.get(key)
        if qid is None:
            qid = len(self.tuples)
            self.ids[key] = qid
            self.tuples.append(key)
        return qid


def _rank_edge_list(verts, mask, labels):
    """Order-sensitive edge-list fingerprint in the style of earlier
    systems: vertex identity is the id rank inside the embedding, and the
    edge list carries the endpoint labels.  The key varies with the
    vertex-id order of each embedding, not just with its pattern.
    """
    m = len(verts)
    rank_of = {v: r for r, v in enumerate(sorted(verts))}
    ranks = [rank_of[v] for v in verts]
    lab = [0] * m
    for i, v in enumerate(verts):
        lab[ranks[i]] = labels[v]
    edges = []
    for i in range(m):
        for j in range(i + 1, m):
            if (mask >> pair_index(i, j, m)) & 1:
                a, b = ranks[i], ranks[j]
                if a > b:
                    a, b = b, a
                edges.append((a, b))
    return (tuple(lab), tuple(sorted(edges)))


_EMPTY_SUBSETS = ((),)


def _all_subsets(n):
    return [tuple(i for i in range(n) if sub >> i & 1) for sub in range(1 << n)]


class _Worker:
    """Join state owned by one worker: private quick-pattern dictionary,
    private aggregation buffers, private statistics."""

    def __init__(self, engine, worker_id):
        self.engine = engine
        self.id = worker_id
        self.qpd = QuickPatternDictionary()
        self.groups = {}
        self.stats = JoinStats()

    def sample_positions(self, positions, depth, column, key):
        eng = self.engine
        n = len(positions)
        self.stats.loop_iterations_total += n
        quota = eng.quota_for(depth)
        if quota is None or n <= quota:
            self.stats.loop_iterations_taken += n
            return positions
        rng = random.Random(f"{eng.seed}:join:{depth}:{column}:{key}")
        perm = list(range(n))
        rng.shuffle(perm)
        chosen = sorted(perm[:quota])
        self.stats.loop_iterations_taken += quota
        return [positions[i] for i in chosen]

    def combine(self, s_verts, s_vset, s_mask, s_ref, depth,
                t_verts, t_mask, t_pat, k, i_pos, j_pos):
        """Combine the running operand s with embedding t on the shared
        vertex k (at position i_pos of s and j_pos of t); yields
        (vertices, vset, edge_mask, qp_id) for every admissible cross-edge
        combination that passes the dissection and pruning checks.
        s_mask/t_mask are tuple-space edge masks."""
        eng = self.engine
        self.stats.combine_calls += 1
        shared = 0
        for v in t_verts:
            if v in s_vset:
                shared += 1
                if shared > 1:
                    return
        g = eng.graph
        labels = g.labels
        n1, n2 = len(s_verts), len(t_verts)
        join_pos = i_pos * n2 + j_pos

        t_rest = tuple(v for v in t_verts if v != k)
        out_verts = s_verts + t_rest
        m = len(out_verts)
        pb = pair_bits(m)
        pb_s = pair_bits(n1)
        pb_t = pair_bits(n2)

        # operand edges mapped to result positions, as mask and adjacency
        base_mask = 0
        base_adj = [0] * m
        for a in range(n1):
            row_s = pb_s[a]
            for b in range(a + 1, n1):
                if s_mask & row_s[b]:
                    base_mask |= pb[a][b]
                    base_adj[a] |= 1 << b
                    base_adj[b] |= 1 << a
        t_pos_map = [0] * n2     # t position -> result position
        shift = 0
        for j in range(n2):
            if j == j_pos:
                t_pos_map[j] = i_pos
                shift = 1
            else:
                t_pos_map[j] = n1 + j - shift
        for a in range(n2):
            row_t = pb_t[a]
            pa = t_pos_map[a]
            for b in range(a + 1, n2):
                if t_mask & row_t[b]:
                    pb_ = t_pos_map[b]
                    base_mask |= pb[pa][pb_]
                    base_adj[pa] |= 1 << pb_
                    base_adj[pb_] |= 1 << pa

        # candidate cross edges between s \ {k} and t \ {k}
        cross = []
        total_cross = 0
        for i, u in enumerate(s_verts):
            if u == k:
                continue
            uset = g.neighbor_set(u)
            for j, v in enumerate(t_verts):
                if v == k or v not in uset:
                    continue
                total_cross += 1
                if eng.frequent2 is not None:
                    lu, lv = labels[u], labels[v]
                    lp = (lu, lv) if lu <= lv else (lv, lu)
                    if lp not in eng.frequent2:
                        continue
                cross.append((i * n2 + j, i, t_pos_map[j]))

        if eng.induce == "vertex":
            if len(cross) < total_cross:
                self.stats.pruned_count += 1
                return
            subsets = (tuple(range(len(cross))),)
        elif not cross:
            if total_cross:
                self.stats.pruned_count += (1 << total_cross) - 1
            subsets = _EMPTY_SUBSETS
        else:
            if len(cross) < total_cross:
                self.stats.pruned_count += (1 << total_cross) - (1 << len(cross))
            subsets = _all_subsets(len(cross))

        prune3 = eng.frequent3 is not None
        if prune3:
            prune3_ok = eng.prune3_ok
            lk = labels[k]
            s_nbrs = [(a, labels[s_verts[a]]) for a in range(n1)
                      if a != i_pos and base_adj[i_pos] >> a & 1]
            t_nbrs = [(t_pos_map[j], labels[t_verts[j]]) for j in range(n2)
                      if j != j_pos and t_mask & pb_t[j][j_pos]]

        order = sorted(range(m), key=out_verts.__getitem__)
        l_expected = ((1 << m) - (1 << n1)) | (1 << i_pos)
        r_expected = (1 << n1) - 1
        out_vset = None

        for subset in subsets:
            mask = base_mask
            bits = 0
            if subset:
                adj = base_adj.copy()
                for idx in subset:
                    bit, pi, pj = cross[idx]
                    mask |= pb[pi][pj]
                    adj[pi] |= 1 << pj
                    adj[pj] |= 1 << pi
                    bits |= 1 << bit
            else:
                adj = base_adj
            if prune3:
                ok = True
                for pa, la in s_nbrs:
                    for pb2, lb in t_nbrs:
                        key = (lk, la, lb, mask & pb[pa][pb2] != 0)
                        verdict = prune3_ok.get(key)
                        if verdict is None:
                            verdict = size3_encoding(*key) in eng.frequent3
                            prune3_ok[key] = verdict
                        if not verdict:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    self.stats.pruned_count += 1
                    continue
            found = _dissect_masks(out_verts, adj, order, n2)
            if found is None:
                continue
            l_mask, r_mask = found
            if l_mask != l_expected or r_mask != r_expected:
                continue
            qp = self.qpd.intern((depth, s_ref, t_pat, join_pos, bits))
            if out_vset is None:
                out_vset = frozenset(out_verts)
            yield (out_verts, out_vset, mask, qp)

    def run(self):
        eng = self.engine
        l1, l2 = eng.plan.lists[0], eng.plan.lists[1]
        h1_all, h2_all = l1.column_index, l2.column_index
        eb1, eb2 = embedding_bytes(l1.arity), embedding_bytes(l2.arity)
        f1_all, f2_all = eng.filtered_cols[0], eng.filtered_cols[1]
        wid, nworkers = self.id, eng.num_workers
        pat1_masks = eng.pattern_masks[0]
        pat2_masks = eng.pattern_masks[1]
        for c1 in range(l1.arity):
            for c2 in range(l2.arity):
                h1 = f1_all[c1] if f1_all is not None else h1_all[c1]
                h2 = f2_all[c2] if f2_all is not None else h2_all[c2]
                small = h1 if len(h1) <= len(h2) else h2
                for key in small:
                    if key % nworkers != wid:
                        continue
                    self.stats.hash_probe_bytes += KEY_BYTES
                    p1 = h1.get(key)
                    p2 = h2.get(key)
                    if not p1 or not p2:
                        continue
                    if f1_all is not None:
                        len1, p1 = p1
                        if not p1:
                            continue
                    else:
                        len1 = len(p1)
                    if f2_all is not None:
                        len2, p2 = p2
                        if not p2:
                            continue
                    else:
                        len2 = len(p2)
                    self.stats.hash_probe_bytes += len1 * eb1 + len2 * eb2
                    p1 = self.sample_positions(p1, 0, c1, key)
                    p2 = self.sample_positions(p2, 1, c2, key)
                    for e1 in p1:
                        s_verts = l1.embeddings[e1]
                        s_vset = frozenset(s_verts)
                        s_pat = l1.pattern_ids[e1]
                        s_mask = pat1_masks[s_pat]
                        for e2 in p2:
                            t_pat = l2.pattern_ids[e2]
                            for cand in self.combine(
                                    s_verts, s_vset, s_mask, s_pat, 0,
                                    l2.embeddings[e2], pat2_masks[t_pat],
                                    t_pat, key, c1, c2):
                                self.extend(cand, 2)
        return self

    def extend(self, cand, li):
        eng = self.engine
        verts, vset, mask, qp = cand
        if li == len(eng.plan.lists):
            self.deliver(verts, mask, qp)
            return
        sl = eng.plan.lists[li]
        eb = embedding_bytes(sl.arity)
        pat_masks = eng.pattern_masks[li]
        fcols = eng.filtered_cols[li]
        for i_pos, k in enumerate(verts):
            for c in range(sl.arity):
                self.stats.hash_probe_bytes += KEY_BYTES
                if fcols is not None:
                    entry = fcols[c].get(k)
                    if not entry:
                        continue
                    self.stats.hash_probe_bytes += entry[0] * eb
                    bucket = entry[1]
                    if not bucket:
                        continue
                else:
                    bucket = sl.column_index[c].get(k)
                    if not bucket:
                        continue
                    self.stats.hash_probe_bytes += len(bucket) * eb
                bucket = self.sample_positions(bucket, li, c, k)
                for e2 in bucket:
                    t_pat = sl.pattern_ids[e2]
                    for nxt in self.combine(
                            verts, vset, mask, qp, li - 1,
                            sl.embeddings[e2], pat_masks[t_pat], t_pat,
                            k, i_pos, c):
                        self.extend(nxt, li + 1)

    def deliver(self, verts, mask, qp):
        eng = self.engine
        self.stats.outputs += 1
        if eng.qp_mode == "index":
            key = qp
        else:
            key = _rank_edge_list(verts, mask, eng.graph.labels)
        acc = self.groups.get(key)
        if acc is None:
            acc = GroupAcc(verts, mask)
            self.groups[key] = acc
        keep = eng.verify == "all" or (eng.verify == "sample" and len(acc.members) < 3)
        acc.add(verts, mask, keep)


class JoinEngine:
    def __init__(self, plan: JoinPlan, g: LabeledGraph, *,
                 frequent3=None, frequent2=None, join_sample=None, seed=0,
                 num_workers=1, qp_mode="index", verify=None):
        plan.validate()
        if qp_mode not in ("index", "edgelist"):
            raise JoinConfigError(f"unknown quick-pattern mode {qp_mode!r}")
        self.plan = plan
        self.graph = g
        self.frequent3 = frequent3
        self.frequent2 = frequent2
        self.join_sample = join_sample
        self.seed = seed
        self.num_workers = max(1, num_workers)
        self.qp_mode = qp_mode
        self.verify = verify
        self.induce = plan.induce
        self.pattern_masks = [[p.edge_mask for p in sl.patterns]
                              for sl in plan.lists]
        self.prune3_ok = {}     # (lk, la, lb, closed) -> frequent?
        # arity-2 column indexes with one orientation per edge, keeping the
        # stored bucket length for probe accounting
        filtered = {}
        self.filtered_cols = []
        for sl in plan.lists:
            if sl.arity != 2:
                self.filtered_cols.append(None)
                continue
            if id(sl) not in filtered:
                emb = sl.embeddings
                filtered[id(sl)] = [
                    {k: (len(bucket),
                         [p for p in bucket if emb[p][0] < emb[p][1]])
                     for k, bucket in sl.column_index[c].items()}
                    for c in range(2)]
            self.filtered_cols.append(filtered[id(sl)])

    def quota_for(self, depth):
        if self.join_sample is None:
            return None
        arity = self.plan.lists[depth].arity
        return self.join_sample if arity == 2 else self.join_sample ** 2

    def run(self):
        workers = [_Worker(self, w) for w in range(self.num_workers)]
        if self.num_workers == 1:
            workers[0].run()
        else:
            with ThreadPoolExecutor(max_workers=self.num_workers) as pool:
                list(pool.map(lambda w: w.run(), workers))
        return self._merge(workers)

    def _merge(self, workers):
        stats = JoinStats()
        global_qpd = QuickPatternDictionary()
        groups = {}
        for w in workers:
            stats.merge(w.stats)
            if self.qp_mode == "index":
                local_to_global = {}
                for local_id, tup in enumerate(w.qpd.tuples):
                    depth, left, right, pos, bits = tup
                    gleft = left if depth == 0 else local_to_global[left]
                    local_to_global[local_id] = global_qpd.intern(
                        (depth, gleft, right, pos, bits))
                remap = lambda key: local_to_global[key]
            else:
                remap = lambda key: key
            for key, acc in w.groups.items():
                gkey = remap(key)
                mine = groups.get(gkey)
                if mine is None:
                    groups[gkey] = acc
                else:
                    mine.merge(acc)
        return groups, global_qpd, stats


def combine_embeddings(g: LabeledGraph, s_vertices, s_edge_mask, t_vertices,
                       t_edge_mask, k, *, frequent3=None, frequent2=None,
                       induce="edge", s_ref=0, t_ref=0):
    """Combine two concrete embeddings on the joining vertex k.

    Returns a list of (vertices, edge_mask, quick_pattern) tuples, one per
    surviving cross-edge combination; empty when the operands overlap
    beyond k, when every combination fails the dissection check, or when
    pruning rejects them.  Edge masks are tuple-space bitarrays.
    """
    engine = JoinEngine.__new__(JoinEngine)
    engine.plan = None          # combine never consults the plan
    engine.graph = g
    engine.frequent3 = frequent3
    engine.frequent2 = frequent2
    engine.join_sample = None
    engine.seed = 0
    engine.num_workers = 1
    engine.qp_mode = "index"
    engine.verify = None
    engine.induce = induce
    engine.prune3_ok = {}
    worker = _Worker(engine, 0)
    out = []
    for verts, vset, mask, qp in worker.combine(
            tuple(s_vertices), frozenset(s_vertices), s_edge_mask, s_ref, 0,
            tuple(t_vertices), t_edge_mask, t_ref, k,
            s_vertices.index(k), t_vertices.index(k)):
        out.append((verts, mask, worker.qpd.tuples[qp][1:]))
    return out


def multiway_join(plan: JoinPlan, g: LabeledGraph, *, frequent3=None,
                  frequent2=None, join_sample=None, seed=0, num_workers=1,
                  qp_mode="index", verify=None):
    """Run the whole join.

    Returns (groups, qp_dictionary, stats): groups maps a global group key
    (qp id for index mode, rank edge list otherwise) to a GroupAcc, and
    qp_dictionary holds the interned quick-pattern tuples in global id
    order (index mode).
    """
    engine = JoinEngine(plan, g, frequent3=frequent3, frequent2=frequent2,
                        join_sample=join_sample, seed=seed,
                        num_workers=num_workers, qp_mode=qp_mode, verify=verify)
    return engine.run()
