"""Polynomial-time realizability deciders with certificates.

``is_1_realizable`` answers whether the periodic lift of a labelled
quotient graph always admits equivalent line realizations; the criterion
is the absence of any cycle other than selfloops.  ``is_2_realizable``
implements the planar-case recursion: strip selfloops, split at cut
vertices, and repeatedly remove a degree-two vertex of the simplified
graph, either by contracting one of its edges (both multiplicities one)
or by deleting it after a balance check (one doubled side).

Every *yes* comes with a decomposition tree whose leaves are single
edges/vertices (dimension one) or balanced triangles and two-vertex
graphs (dimension two).  Every *no* comes with a replayable minor witness
reaching a forbidden shape: a parallel pair or balanced triangle for
dimension one; the doubled-double-pair triangle or the balanced complete
graph on four vertices for dimension two.  Witness construction for the
minimum-degree-three case falls back to the exhaustive engine, so for
graphs beyond its bound a non-replayable reason trace is attached
instead.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .certificates import DecompositionTree, RealizabilityVerdict
from .errors import RealdimError
from .graphs import GainEdge, GainGraph, SimpleGraph
from .minors import (
    DEFAULT_EDGE_BOUND,
    DEFAULT_VERTEX_BOUND,
    K3_BULLETBULLET,
    MinorOp,
    MinorPattern,
    MinorWitness,
    ReasonTrace,
    balanced_complete_pattern,
    finite_has_minor,
    finite_rd_upper3,
    has_minor,
)

K2_BULLET_PATTERN = MinorPattern.family("k2-bullet")
K3BB_PATTERN = MinorPattern.family(K3_BULLETBULLET)
K3_ZERO_PATTERN = balanced_complete_pattern(3)
K4_ZERO_PATTERN = balanced_complete_pattern(4)


def _require_nonempty(g: GainGraph):
    if g.n == 0:
        raise RealdimError("realizability is undefined for the empty graph")


class _IdAlloc:
    def __init__(self, start: int):
        self._next = start

    def take(self) -> int:
        self._next += 1
        return self._next - 1


@dataclass
class _Yes:
    tree: DecompositionTree


@dataclass
class _No:
    witness: object  # MinorWitness | ReasonTrace


def _prefix(no: _No, ops) -> _No:
    if isinstance(no.witness, MinorWitness):
        return _No(MinorWitness(no.witness.pattern, tuple(ops) + no.witness.ops))
    return no


# ---------------------------------------------------------------------------
# dimension 1
# ---------------------------------------------------------------------------


def is_1_realizable(g: GainGraph) -> RealizabilityVerdict:
    """Line realizability: no parallel pair and a forest after ignoring loops."""
    _require_nonempty(g)
    pair = _smallest_parallel_pair(g)
    if pair is not None:
        return RealizabilityVerdict(1, False, _witness_parallel_pair(g, *pair))
    cycle = g.underlying_simple_graph().find_cycle()
    if cycle is not None:
        return RealizabilityVerdict(1, False, _witness_simple_cycle(g, cycle))
    return RealizabilityVerdict(1, True, _forest_tree(g))


def _smallest_parallel_pair(g: GainGraph):
    best = None
    for e in g.edges:
        if e.is_loop:
            continue
        a, b = min(e.tail, e.head), max(e.tail, e.head)
        if g.multiplicity(a, b) >= 2 and (best is None or (a, b) < best):
            best = (a, b)
    return best


def _keep_only(g: GainGraph, keep_vertices, keep_edge_ids) -> list:
    """Deletion ops trimming g to a vertex/edge subset; edges first."""
    ops = [
        MinorOp("delete_edge", e.id) for e in g.edges if e.id not in keep_edge_ids
    ]
    ops += [
        MinorOp("delete_vertex", v) for v in g.vertices if v not in keep_vertices
    ]
    return ops


def _witness_parallel_pair(g: GainGraph, a: int, b: int) -> MinorWitness:
    keep = sorted(e.id for e in g.edges_between(a, b))[:2]
    ops = _keep_only(g, {a, b}, set(keep))
    w = MinorWitness(K2_BULLET_PATTERN, tuple(ops))
    return w


def _cycle_edges(g: GainGraph, cycle: list) -> list:
    edges = []
    for i in range(len(cycle)):
        a, b = cycle[i], cycle[(i + 1) % len(cycle)]
        edges.append(min(g.edges_between(a, b), key=lambda e: e.id))
    return edges


def _witness_simple_cycle(g: GainGraph, cycle: list) -> MinorWitness:
    """Contract a cycle to a balanced triangle or an unbalanced pair."""
    edges = _cycle_edges(g, cycle)
    gain = sum(e.gain_from(cycle[i]) for i, e in enumerate(edges))
    ops = _keep_only(g, set(cycle), {e.id for e in edges})
    k = len(cycle)
    target = 3 if gain == 0 else 2
    # merge cycle[1], ..., cycle[k-target] into cycle[0]
    for i in range(k - target):
        ops.append(MinorOp("contract_edge", edges[i].id, cycle[0]))
    pattern = K3_ZERO_PATTERN if gain == 0 else K2_BULLET_PATTERN
    return MinorWitness(pattern, tuple(ops))


def _forest_tree(g: GainGraph) -> DecompositionTree:
    loops = [e for e in g.edges if e.is_loop]
    core = g.delete_edges([e.id for e in loops]) if loops else g
    si = core.underlying_simple_graph()
    comp_trees = []
    for comp in si.components():
        order = _bfs_order(si, comp)
        tree = None
        for v, parent in order:
            if parent is None:
                continue
            e = core.edges_between(parent, v)[0]
            leaf = DecompositionTree.leaf(GainGraph((parent, v), (e,)))
            tree = leaf if tree is None else DecompositionTree.one_sum(tree, leaf, parent)
        if tree is None:
            tree = DecompositionTree.leaf(GainGraph((min(comp),), ()))
        comp_trees.append(tree)
    tree = DecompositionTree.disjoint_union(comp_trees)
    return _attach_loops(tree, loops)


def _bfs_order(si: SimpleGraph, comp) -> list:
    root = min(comp)
    seen = {root}
    out = [(root, None)]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(si.neighbors(u)):
            if w not in seen:
                seen.add(w)
                out.append((w, u))
                queue.append(w)
    return out


def _attach_loops(tree: DecompositionTree, loops) -> DecompositionTree:
    by_vertex: dict = {}
    for e in loops:
        by_vertex.setdefault(e.tail, []).append(e)
    for v in sorted(by_vertex):
        leaf = DecompositionTree.leaf(GainGraph((v,), by_vertex[v]))
        tree = DecompositionTree.one_sum(tree, leaf, v)
    return tree


# ---------------------------------------------------------------------------
# dimension 2
# ---------------------------------------------------------------------------


def is_2_realizable(g: GainGraph) -> RealizabilityVerdict:
    """Plane realizability, decided by the degree-two recursion."""
    _require_nonempty(g)
    alloc = _IdAlloc(g.fresh_edge_id())
    loops = [e for e in g.edges if e.is_loop]
    core = g.delete_edges([e.id for e in loops]) if loops else g
    res = _decide2(core, alloc)
    if isinstance(res, _No):
        res = _prefix(res, [MinorOp("delete_edge", e.id) for e in loops])
        return RealizabilityVerdict(2, False, res.witness)
    return RealizabilityVerdict(2, True, _attach_loops(res.tree, loops))


def _decide2(h: GainGraph, alloc: _IdAlloc):
    """Core recursion on a loopless graph; answers in h's own labelling frame."""
    if h.n <= 2:
        return _Yes(DecompositionTree.leaf(h))
    si = h.underlying_simple_graph()

    comps = si.components()
    if len(comps) > 1:
        children = []
        for comp in comps:
            res = _decide2(h.induced(comp), alloc)
            if isinstance(res, _No):
                ops = [MinorOp("delete_vertex", v) for v in h.vertices if v not in comp]
                return _prefix(res, ops)
            children.append(res.tree)
        return _Yes(DecompositionTree.disjoint_union(children))

    arts = si.articulation_points()
    if arts:
        return _decide2_blocks(h, si, alloc)

    if h.n == 3:
        return _decide2_triangle(h, alloc)

    degree = {v: si.degree(v) for v in h.vertices}
    if min(degree.values()) >= 3:
        return _No(
            _fallback_witness(
                h,
                "every vertex of the simplified graph has degree at least three "
                "in a two-connected piece, forcing a forbidden minor",
            )
        )

    v = min(u for u in h.vertices if degree[u] == 2)
    x, y = sorted(si.neighbors(v))
    mvx, mvy = h.multiplicity(v, x), h.multiplicity(v, y)
    if mvx >= 2 and mvy >= 2:
        return _No(_witness_both_doubled(h, v, x, y))
    if mvx == 1 and mvy == 1:
        return _contract_step(h, v, x, y, alloc)
    if mvy >= 2:
        x, y = y, x
    return _deletion_step(h, v, x, y, alloc)


def _decide2_blocks(h: GainGraph, si: SimpleGraph, alloc: _IdAlloc):
    blocks = si.blocks()

    def block_subgraph(idx):
        vset, eset = blocks[idx]
        edges = [e for e in h.edges if e.pair() in eset]
        return GainGraph(vset, edges)

    results = []
    for idx in range(len(blocks)):
        sub = block_subgraph(idx)
        res = _decide2(sub, alloc)
        if isinstance(res, _No):
            keep_edges = {e.id for e in sub.edges}
            ops = _keep_only(h, set(sub.vertices), keep_edges)
            return _prefix(res, ops)
        results.append(res.tree)

    # Fold the blocks along the block-cut structure with one-sums.
    order = sorted(range(len(blocks)), key=lambda i: sorted(blocks[i][0]))
    start = order[0]
    covered = set(blocks[start][0])
    tree = results[start]
    pending = [i for i in order if i != start]
    while pending:
        for i in list(pending):
            shared = covered & blocks[i][0]
            if shared:
                if len(shared) != 1:
                    raise RealdimError("blocks overlap in more than a cut vertex")
                tree = DecompositionTree.one_sum(tree, results[i], min(shared))
                covered |= blocks[i][0]
                pending.remove(i)
                break
        else:
            raise RealdimError("block-cut structure is not connected")
    return _Yes(tree)


def _decide2_triangle(h: GainGraph, alloc: _IdAlloc):
    """Three vertices, two-connected (complete) simplified graph."""
    if h.multiplicity_graph().is_spanning_connected(h.vertices):
        return _No(_witness_trim_to_double_double(h))
    others = {
        v: [u for u in h.vertices if u != v] for v in h.vertices
    }
    w = min(
        v
        for v in h.vertices
        if all(h.multiplicity(v, u) == 1 for u in others[v])
    )
    a, b = sorted(others[w])
    return _contract_step(h, w, a, b, alloc)


def _contract_step(h: GainGraph, w: int, a: int, b: int, alloc: _IdAlloc):
    """Both multiplicities at w are one: contract the w-a edge.

    On yes, the answer glues a balanced triangle on {w, a, b} to the
    contracted graph's tree along the a-b edge created by the merge.
    """
    ea = h.edges_between(w, a)[0]
    eb = h.edges_between(w, b)[0]
    psi = {a: ea.gain_from(w), b: eb.gain_from(w)}
    h2 = h.switch_many(psi)
    child = h2.contract_edge(ea.id, survivor=a)
    res = _decide2(child, alloc)
    if isinstance(res, _No):
        return _prefix(res, [MinorOp("contract_edge", ea.id, a)])
    # Fresh ids throughout: reusing real ids here can collide with the same
    # id drifting to other endpoints inside the sibling subtree.
    triangle = GainGraph(
        (w, a, b),
        (
            GainEdge(alloc.take(), w, a, 0),
            GainEdge(alloc.take(), w, b, 0),
            GainEdge(alloc.take(), a, b, 0),
        ),
    )
    node = DecompositionTree.balanced_two_sum(
        DecompositionTree.leaf(triangle), res.tree, (a, b), zero_child=0
    )
    return _Yes(node.switched({u: -s for u, s in psi.items()}))


def _deletion_step(h: GainGraph, v: int, x: int, y: int, alloc: _IdAlloc):
    """Multiplicity two towards x, one towards y: delete v after a balance check."""
    rest = h.delete_vertex(v)
    bal = rest.balance()
    if not bal.balanced:
        return _No(_witness_unbalanced_rest(h, v, x, y, bal.witness))
    psi = dict(bal.potentials)
    h2 = h.switch_many(psi)
    rest2 = h2.delete_vertex(v)
    existing = rest2.edges_between(x, y)
    if existing:
        child = rest2
        shared_id = existing[0].id
        added = False
    else:
        shared_id = alloc.take()
        child = rest2.with_edge(x, y, 0, id=shared_id)
        added = True
    res = _decide2(child, alloc)
    if isinstance(res, _No):
        if not added and isinstance(res.witness, MinorWitness):
            return _prefix(res, [MinorOp("delete_vertex", v)])
        return _No(
            _fallback_witness(
                h,
                "deleting the degree-two vertex leaves a balanced graph whose "
                "completion is not two-realizable",
            )
        )
    piece = h2.induced({v, x, y})
    if added:
        piece = piece.with_edge(x, y, 0, id=shared_id)
    piece_res = _contract_step(piece, y, x, v, alloc)
    if isinstance(piece_res, _No):
        raise RealdimError("internal: three-vertex piece with non-spanning "
                           "multiplicity graph must be two-realizable")
    node = DecompositionTree.balanced_two_sum(
        piece_res.tree, res.tree, (x, y), zero_child=1
    )
    return _Yes(node.switched({u: -s for u, s in psi.items()}))


# -- no-witness constructions ---------------------------------------------------


def _fallback_witness(h: GainGraph, context: str):
    if h.n <= DEFAULT_VERTEX_BOUND and h.m <= DEFAULT_EDGE_BOUND:
        w = has_minor(h, K3BB_PATTERN)
        if w is None:
            w = has_minor(h, K4_ZERO_PATTERN)
        if w is None:
            raise RealdimError(
                "internal: decider answered no but the exhaustive search found "
                "no forbidden minor"
            )
        return w
    return ReasonTrace(
        context
        + f"; witness search skipped beyond {DEFAULT_VERTEX_BOUND} vertices / "
        f"{DEFAULT_EDGE_BOUND} edges"
    )


def _witness_trim_to_double_double(h: GainGraph) -> MinorWitness:
    """Three vertices with spanning multiplicity graph: delete surplus edges."""
    pairs = [(a, b) for i, a in enumerate(h.vertices) for b in h.vertices[i + 1 :]]
    doubled = [p for p in pairs if h.multiplicity(*p) >= 2]
    single = next((p for p in pairs if p not in doubled), None)
    if single is None:
        single = min(doubled)
        doubled = [p for p in doubled if p != single]
    doubled = doubled[:2]
    keep = set()
    for p in doubled:
        keep.update(sorted(e.id for e in h.edges_between(*p))[:2])
    keep.update(sorted(e.id for e in h.edges_between(*single))[:1])
    ops = _keep_only(h, set(h.vertices), keep)
    return MinorWitness(K3BB_PATTERN, tuple(ops))


def _witness_both_doubled(h: GainGraph, v: int, x: int, y: int) -> MinorWitness:
    """Doubled towards both neighbors: contract an x-y path avoiding v."""
    si = h.underlying_simple_graph()
    path = _shortest_path_avoiding(si, x, y, v)
    keep_vertices = {v} | set(path)
    keep = set()
    keep.update(sorted(e.id for e in h.edges_between(v, x))[:2])
    keep.update(sorted(e.id for e in h.edges_between(v, y))[:2])
    path_edges = [
        min(h.edges_between(path[i], path[i + 1]), key=lambda e: e.id)
        for i in range(len(path) - 1)
    ]
    keep.update(e.id for e in path_edges)
    ops = _keep_only(h, keep_vertices, keep)
    for e in path_edges[:-1]:
        ops.append(MinorOp("contract_edge", e.id, x))
    return MinorWitness(K3BB_PATTERN, tuple(ops))


def _shortest_path_avoiding(si: SimpleGraph, x: int, y: int, avoid: int) -> list:
    prev = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for w in sorted(si.neighbors(u)):
            if w != avoid and w not in prev:
                prev[w] = u
                queue.append(w)
    if y not in prev:
        raise RealdimError("expected an x-y path avoiding the degree-two vertex")
    path = [y]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _witness_unbalanced_rest(
    h: GainGraph, v: int, x: int, y: int, walk
) -> MinorWitness:
    """Unbalanced cycle beyond v: route x and y to it disjointly and contract.

    The final shape keeps v, the doubled pair towards x, the single edge
    towards y, and turns the unbalanced cycle into a parallel pair between
    the two path endpoints.
    """
    cyc_vertices = list(walk.sequence[0:-1:2])
    cyc_edges = list(walk.sequence[1::2])
    si_rest = h.delete_vertex(v).underlying_simple_graph()
    p1, p2 = _two_disjoint_paths(si_rest, x, y, set(cyc_vertices))
    u1, u2 = p1[-1], p2[-1]

    keep_vertices = {v} | set(p1) | set(p2) | set(cyc_vertices)
    keep = set()
    keep.update(sorted(e.id for e in h.edges_between(v, x))[:2])
    keep.update(sorted(e.id for e in h.edges_between(v, y))[:1])
    path_edges_1 = [
        min(h.edges_between(p1[i], p1[i + 1]), key=lambda e: e.id)
        for i in range(len(p1) - 1)
    ]
    path_edges_2 = [
        min(h.edges_between(p2[i], p2[i + 1]), key=lambda e: e.id)
        for i in range(len(p2) - 1)
    ]
    keep.update(e.id for e in path_edges_1)
    keep.update(e.id for e in path_edges_2)
    keep.update(e.id for e in cyc_edges)
    ops = _keep_only(h, keep_vertices, keep)

    for e in path_edges_1:
        ops.append(MinorOp("contract_edge", e.id, x))
    for e in path_edges_2:
        ops.append(MinorOp("contract_edge", e.id, y))

    # The cycle now passes through x (= u1 merged) and y (= u2 merged);
    # contract each arc between them down to a single edge.
    i1, i2 = cyc_vertices.index(u1), cyc_vertices.index(u2)
    k = len(cyc_vertices)
    arc1 = [cyc_edges[i % k] for i in range(i1, i1 + (i2 - i1) % k)]
    arc2 = [cyc_edges[i % k] for i in range(i2, i2 + (i1 - i2) % k)]
    for arc in (arc1, arc2):
        for e in arc[:-1]:
            ops.append(MinorOp("contract_edge", e.id, x if arc is arc1 else y))
    return MinorWitness(K3BB_PATTERN, tuple(ops))


def _two_disjoint_paths(si: SimpleGraph, x: int, y: int, targets: set):
    """Vertex-disjoint paths from x and from y to distinct target vertices.

    Unit-capacity flow with split vertices; paths stop at first target
    contact.  Existence is guaranteed by two-connectedness of the graph
    the callers work in.
    """
    arcs: dict = {}

    def add(u, w):
        arcs.setdefault(u, {})[w] = arcs.get(u, {}).get(w, 0) + 1

    for vtx in si.vertices:
        if vtx in targets:
            add(("in", vtx), "T")
        else:
            add(("in", vtx), ("out", vtx))
    for pair in si.edges:
        a, b = tuple(pair)
        for s, t in ((a, b), (b, a)):
            if s not in targets:
                add(("out", s), ("in", t))
    add("S", ("in", x))
    add("S", ("in", y))

    flow: dict = {}

    def residual(u, w):
        return arcs.get(u, {}).get(w, 0) - flow.get((u, w), 0) + flow.get((w, u), 0)

    pushed = 0
    for _ in range(2):
        prev = {"S": None}
        queue = deque(["S"])
        while queue:
            u = queue.popleft()
            if u == "T":
                break
            neighbors = set(arcs.get(u, {})) | {
                a for (a, b2) in flow if b2 == u and flow[(a, b2)] > 0
            }
            for w in sorted(neighbors, key=str):
                if w not in prev and residual(u, w) > 0:
                    prev[w] = u
                    queue.append(w)
        if "T" not in prev:
            break
        node = "T"
        while prev[node] is not None:
            u = prev[node]
            if flow.get((node, u), 0) > 0:
                flow[(node, u)] -= 1
            else:
                flow[(u, node)] = flow.get((u, node), 0) + 1
            node = u
        pushed += 1
    if pushed < 2:
        raise RealdimError("expected two disjoint paths to the unbalanced cycle")

    def walk(start):
        path = [start]
        node = ("in", start)
        for _ in range(4 * (si.n + 2)):
            nxt = next(w for w in arcs.get(node, {}) if flow.get((node, w), 0) > 0)
            if nxt == "T":
                return path
            if isinstance(nxt, tuple) and nxt[0] == "in":
                path.append(nxt[1])
            node = nxt
        raise RealdimError("flow decomposition did not terminate")

    return walk(x), walk(y)


# ---------------------------------------------------------------------------
# exact values and bounds
# ---------------------------------------------------------------------------


def realizable_dimension_complete_case(g: GainGraph) -> int:
    """Exact realizable dimension when the simplified graph is complete.

    Equals the vertex count when the multiplicity graph is connected and
    spanning (every periodic realization is then universally rigid), and
    one less otherwise.
    """
    _require_nonempty(g)
    if not g.underlying_simple_graph().is_complete():
        raise RealdimError("underlying simple graph must be complete")
    mg = g.multiplicity_graph()
    return g.n if mg.is_spanning_connected(g.vertices) else g.n - 1


@dataclass(frozen=True)
class RdBounds:
    lower: int
    upper: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def as_tuple(self) -> tuple:
        return (self.lower, self.upper)


def realizable_dimension_bounds(g: GainGraph, brute_force_bound: int = 10) -> RdBounds:
    """Sound interval for the realizable dimension.

    The lower bound combines the finite-graph dimension of the simplified
    graph, the complete-case value, and the deciders' refusals; the upper
    bound is the vertex count, tightened when a decider answers yes.  The
    interval collapses to a point for every decided case.
    """
    _require_nonempty(g)
    n = g.n
    lower = 1
    si = g.underlying_simple_graph()
    if si.is_complete():
        complete_value = realizable_dimension_complete_case(g)
        if complete_value == n:
            return RdBounds(n, n)
        lower = max(lower, n - 1)
    elif finite_has_minor(si, "K4"):
        if si.n <= brute_force_bound:
            f = finite_rd_upper3(si, brute_force_bound)
            lower = max(lower, 4 if f == ">=4" else f)
        else:
            lower = max(lower, 3)
    if is_1_realizable(g).answer:
        return RdBounds(1, 1)
    lower = max(lower, 2)
    if is_2_realizable(g).answer:
        return RdBounds(2, 2)
    lower = max(lower, 3)
    return RdBounds(lower, n)
