"""Instance preprocessing: the delete-if-off-every-path reduction rule and
the disjoint-path predicates behind it and the local source/target test."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from . import kernels
from .errors import CapExceeded, GraphError, InfeasibleInstance
from .graph import WeightedGraph, induced_subgraph, normalize_edge

DEFAULT_MAX_N = 64


@dataclass(frozen=True)
class TrackingInstance:
    graph: WeightedGraph
    source: int
    target: int

    def __post_init__(self):
        n = self.graph.n
        if not (0 <= self.source < n and 0 <= self.target < n):
            raise GraphError("source/target out of range")
        if self.source == self.target:
            raise GraphError("source and target must differ")


def two_disjoint_paths(
    g: WeightedGraph,
    a1: int,
    b1: int,
    a2: int,
    b2: int,
    max_n: int = DEFAULT_MAX_N,
) -> bool:
    """Is there an a1-b1 path and an a2-b2 path sharing no vertex?

    Exhaustive search (exact at desk scale); single-vertex paths are legal.
    The cap guards against pathological blowup on large inputs.
    """
    for v in (a1, b1, a2, b2):
        if not (0 <= v < g.n):
            raise GraphError(f"endpoint {v} out of range")
    if {a1, b1} & {a2, b2}:
        raise GraphError("endpoint pairs must be disjoint vertex sets")
    if g.n > max_n:
        raise CapExceeded(
            f"disjoint-path search capped at {max_n} vertices (got {g.n})"
        )
    return kernels.disjoint_paths(g.adj_masks, a1, b1, a2, b2)


def _split_flow_value(g: WeightedGraph, v: int, s: int, t: int) -> int:
    """Max number (capped at 2) of vertex-disjoint-except-v paths from v
    hitting s and t, via unit-vertex-capacity augmentation (Menger)."""
    # node ids: ('in', u) / ('out', u); v itself is the source, 'T' the sink
    cap: dict[tuple, dict[tuple, int]] = {}

    def add(a, b, c):
        cap.setdefault(a, {})[b] = cap.get(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    src = ("out", v)
    for u in range(g.n):
        if u == v:
            continue
        if u == s or u == t:
            add(("in", u), "T", 1)
        else:
            add(("in", u), ("out", u), 1)
    for x, y in sorted(g.edges):
        for a, b in ((x, y), (y, x)):
            if b == v:
                continue
            tail = src if a == v else ("out", a)
            if a != v and (a == s or a == t):
                continue  # s and t are sinks only; paths never pass through
            add(tail, ("in", b), 1)

    flow = 0
    while flow < 2:
        parent: dict[tuple, tuple] = {src: src}
        q = deque([src])
        while q:
            x = q.popleft()
            if x == "T":
                break
            for y in sorted(cap.get(x, {}), key=repr):
                if y not in parent and cap[x][y] > 0:
                    parent[y] = x
                    q.append(y)
        if "T" not in parent:
            break
        y = "T"
        while y != src:
            x = parent[y]
            cap[x][y] -= 1
            cap[y][x] += 1
            y = x
        flow += 1
    return flow


def vertex_on_st_path(inst: TrackingInstance, v: int) -> bool:
    """Does some simple source-target path contain v?

    Reduces to two vertex-disjoint paths from v to the source and to the
    target, decided exactly by unit-capacity max-flow.
    """
    g, s, t = inst.graph, inst.source, inst.target
    if not (0 <= v < g.n):
        raise GraphError(f"vertex {v} out of range")
    reach_s = kernels.reachable(g.adj_masks, None, s)
    if v == s or v == t:
        return bool((reach_s >> t) & 1)
    if not ((reach_s >> v) & 1 and (reach_s >> t) & 1):
        return False
    return _split_flow_value(g, v, s, t) >= 2


def edge_on_st_path(inst: TrackingInstance, e: tuple[int, int]) -> bool:
    """Does some simple source-target path traverse the edge e?"""
    g, s, t = inst.graph, inst.source, inst.target
    u, v = normalize_edge(*e)
    if (u, v) not in g.edges:
        raise GraphError(f"edge ({u}, {v}) not in graph")
    for x, y in ((u, v), (v, u)):
        # a path entering the edge at x and leaving toward the target at y
        if x == t or y == s:
            continue
        if kernels.disjoint_paths(g.adj_masks, s, x, y, t):
            return True
    return False


def reduce(inst: TrackingInstance) -> TrackingInstance:
    """Exhaustively delete vertices and edges lying on no source-target
    path.  Idempotent; raises when source and target are disconnected."""
    return reduce_with_mapping(inst)[0]


def reduce_with_mapping(
    inst: TrackingInstance,
) -> tuple[TrackingInstance, tuple[int, ...]]:
    """Like :func:`reduce`, also returning the map new index -> original."""
    g = inst.graph
    if not (kernels.reachable(g.adj_masks, None, inst.source) >> inst.target) & 1:
        raise InfeasibleInstance("no s-t path exists")

    cur = inst
    old_of_new = tuple(range(g.n))
    while True:
        bad_vertices = [
            v for v in range(cur.graph.n) if not vertex_on_st_path(cur, v)
        ]
        if bad_vertices:
            keep = [v for v in range(cur.graph.n) if v not in set(bad_vertices)]
            sub, onw = induced_subgraph(cur.graph, keep)
            remap = {old: new for new, old in enumerate(onw)}
            cur = TrackingInstance(sub, remap[cur.source], remap[cur.target])
            old_of_new = tuple(old_of_new[o] for o in onw)
            continue
        bad_edges = [
            e for e in sorted(cur.graph.edges) if not edge_on_st_path(cur, e)
        ]
        if bad_edges:
            kept_edges = cur.graph.edges - frozenset(bad_edges)
            sub = WeightedGraph.build(cur.graph.n, kept_edges, cur.graph.weights)
            cur = TrackingInstance(sub, cur.source, cur.target)
            continue
        return cur, old_of_new


def is_local_st_pair(
    inst: TrackingInstance, sub_vertices: Iterable[int], a: int, b: int
) -> bool:
    """Do disjoint access paths source->a and b->target exist that touch
    the given subgraph only in a and b respectively?

    Decided on the graph with the rest of the subgraph deleted; a == source
    and b == target degenerate to single-vertex access paths.
    """
    sub = frozenset(sub_vertices)
    if a not in sub or b not in sub:
        raise GraphError("a and b must belong to the subgraph's vertex set")
    if a == b:
        return False
    g, s, t = inst.graph, inst.source, inst.target
    deleted = sub - {a, b}
    if s in deleted or t in deleted:
        return False
    if s == b or a == t:
        return False  # the access paths would have to share s (resp. t)
    alive = kernels.full_mask(g.n)
    for v in deleted:
        alive &= ~(1 << v)
    return kernels.disjoint_paths(g.adj_masks, s, a, b, t, alive)
