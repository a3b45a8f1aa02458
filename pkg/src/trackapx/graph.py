"""Weighted simple graphs and the elementary path/cycle routines used
throughout the solvers.

Vertices are dense integer indices 0..n-1.  All types are immutable after
construction and every operation is pure, so shared instances are safe to
use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .errors import GraphError


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with positive integer vertex weights."""

    n: int
    edges: frozenset[tuple[int, int]]
    weights: tuple[int, ...]

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        weights: Optional[Iterable[int]] = None,
    ) -> "WeightedGraph":
        norm = frozenset(normalize_edge(u, v) for u, v in edges)
        w = tuple(weights) if weights is not None else (1,) * n
        return cls(n, norm, w)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        if len(self.weights) != self.n:
            raise GraphError(
                f"expected {self.n} weights, got {len(self.weights)}"
            )
        for w in self.weights:
            if not isinstance(w, int) or w < 1:
                raise GraphError(f"vertex weights must be integers >= 1, got {w!r}")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise GraphError(f"edge ({u}, {v}) not normalized; use build()")

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edges

    def weight_of(self, members: Iterable[int]) -> int:
        return sum(self.weights[v] for v in members)

    def is_unweighted(self) -> bool:
        """True when all vertex weights are equal (not necessarily 1)."""
        return len(set(self.weights)) <= 1


def induced_subgraph(
    g: WeightedGraph, keep: Iterable[int]
) -> tuple[WeightedGraph, tuple[int, ...]]:
    """Induced subgraph on ``keep`` with order-preserving renumbering.

    Returns the subgraph and the tuple mapping new index -> old index.
    """
    old_of_new = tuple(sorted(set(keep)))
    new_of_old = {old: new for new, old in enumerate(old_of_new)}
    edges = [
        (new_of_old[u], new_of_old[v])
        for u, v in g.edges
        if u in new_of_old and v in new_of_old
    ]
    weights = tuple(g.weights[v] for v in old_of_new)
    return WeightedGraph.build(len(old_of_new), edges, weights), old_of_new


@dataclass(frozen=True, order=True)
class Path:
    """Simple path given by its ordered vertex sequence."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError(f"path repeats a vertex: {self.vertices}")

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edge_list(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [normalize_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def canonical(self) -> "Path":
        """The lexicographically smaller of the two orientations."""
        rev = tuple(reversed(self.vertices))
        return self if self.vertices <= rev else Path(rev)

    def spans_edges_of(self, g: WeightedGraph) -> bool:
        return all(g.has_edge(u, v) for u, v in self.edge_list())


@dataclass(frozen=True)
class PathGroup:
    """A set of pairwise vertex-disjoint paths forming one covering
    constraint ("select at least one vertex from the union")."""

    paths: frozenset[Path]

    def __post_init__(self):
        if not self.paths:
            raise GraphError("a path group must contain at least one path")
        seen: set[int] = set()
        for p in self.paths:
            if seen & set(p.vertices):
                raise GraphError("paths in a group must be vertex-disjoint")
            seen.update(p.vertices)

    @classmethod
    def of(cls, paths: Iterable[Path]) -> "PathGroup":
        return cls(frozenset(p.canonical() for p in paths))

    @cached_property
    def union_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for p in self.paths:
            out.update(p.vertices)
        return frozenset(out)

    def sort_key(self) -> tuple:
        return tuple(sorted(p.vertices for p in self.paths))


@dataclass(frozen=True)
class VertexSelection:
    """A candidate solution: vertex subset plus its total weight."""

    members: frozenset[int]
    total_weight: int

    @classmethod
    def of(cls, g: WeightedGraph, members: Iterable[int]) -> "VertexSelection":
        ms = frozenset(members)
        return cls(ms, g.weight_of(ms))

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


def _members(removed) -> frozenset[int]:
    if isinstance(removed, VertexSelection):
        return removed.members
    return frozenset(removed)


def is_acyclic_after_removal(g: WeightedGraph, removed) -> bool:
    """True iff g minus the removed vertices (and incident edges) is a forest."""
    gone = _members(removed)
    color = [0] * g.n  # 0 unseen, 1 done
    parent = [-1] * g.n
    for root in range(g.n):
        if root in gone or color[root]:
            continue
        stack = [root]
        color[root] = 1
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in gone or w == parent[u]:
                    continue
                if color[w]:
                    return False
                color[w] = 1
                parent[w] = u
                stack.append(w)
    return True


def connected_components(g: WeightedGraph, alive=None) -> list[list[int]]:
    live = set(range(g.n)) if alive is None else set(alive)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for root in sorted(live):
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        stack = [root]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in live and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def find_cycle(g: WeightedGraph) -> Optional[Path]:
    """First cycle found by depth-first search from the lowest vertex index.

    The cycle is returned as a closed vertex sequence (the edge between the
    last and first vertex is implicit), rotated so the smallest vertex comes
    first and oriented toward its smaller neighbor, which makes the output
    reproducible.
    """
    state = [0] * g.n  # 0 unseen, 1 on stack, 2 finished
    parent = [-1] * g.n
    for root in range(g.n):
        if state[root]:
            continue
        # iterative DFS keeping an explicit neighbor cursor per vertex
        stack = [(root, iter(g.adj[root]))]
        state[root] = 1
        order = [root]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent[u]:
                    continue
                if state[w] == 1:
                    # back edge: cycle is the stack segment from w to u
                    i = order.index(w)
                    return _canonical_cycle(order[i:])
                if state[w] == 0:
                    parent[w] = u
                    state[w] = 1
                    order.append(w)
                    stack.append((w, iter(g.adj[w])))
                    advanced = True
                    break
            if not advanced:
                state[u] = 2
                order.pop()
                stack.pop()
    return None


def _canonical_cycle(cycle: list[int]) -> Path:
    k = len(cycle)
    i = cycle.index(min(cycle))
    rot = cycle[i:] + cycle[:i]
    if rot[1] > rot[-1]:
        rot = [rot[0]] + rot[1:][::-1]
    return Path(tuple(rot))


def shortest_cycle(g: WeightedGraph) -> Optional[Path]:
    """A minimum-length cycle (None for forests), as a closed sequence.

    Breadth-first search from every root; each non-tree edge closes a walk
    whose two tree branches meet at their lowest common ancestor, giving a
    cycle candidate.  The minimum over all roots is the girth.
    """
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in g.adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
            frontier = nxt
        for u, w in g.edges:
            if u not in dist or w not in dist or parent[u] == w or parent[w] == u:
                continue
            up, wp = u, w
            trail_u, trail_w = [u], [w]
            while dist[up] > dist[wp]:
                up = parent[up]
                trail_u.append(up)
            while dist[wp] > dist[up]:
                wp = parent[wp]
                trail_w.append(wp)
            while up != wp:
                up = parent[up]
                wp = parent[wp]
                trail_u.append(up)
                trail_w.append(wp)
            if trail_u[-1] != trail_w[-1]:
                continue  # endpoints in different components of the BFS tree
            seq = trail_u[:-1] + list(reversed(trail_w))
            if len(set(seq)) != len(seq):
                continue
            cand = _canonical_cycle(seq)
            key = (len(cand.vertices), cand.vertices)
            if best is None or key < best:
                best = key
    return None if best is None else Path(best[1])


def assert_forest(f: WeightedGraph, what: str = "input") -> None:
    if not is_acyclic_after_removal(f, ()):
        raise GraphError(f"{what} contains a cycle; a forest is required")


def unique_forest_path(f: WeightedGraph, u: int, v: int) -> Optional[Path]:
    """The unique u-v path in a forest, or None if u and v lie in
    different trees.  A single-vertex path is returned when u == v."""
    assert_forest(f)
    if not (0 <= u < f.n and 0 <= v < f.n):
        raise GraphError(f"path endpoints ({u}, {v}) out of range")
    if u == v:
        return Path((u,))
    parent = {u: -1}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for w in f.adj[x]:
            if w not in parent:
                parent[w] = x
                stack.append(w)
    if v not in parent:
        return None
    seq = [v]
    while seq[-1] != u:
        seq.append(parent[seq[-1]])
    return Path(tuple(reversed(seq)))
