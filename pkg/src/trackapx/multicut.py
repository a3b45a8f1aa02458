"""Vertex multicut: 2-approximate bin rounding on weighted forests, exact
integral solving on equal-weight forests, and a 4-approximate variant for
chordal graphs via lazy path separation.

The rounding idea: cap and scale the fractional LP solution, measure
rooted prefix distances, and read off "bins" -- vertex sets whose
fractional-distance interval contains a common offset in [0,1).  Every bin
cuts every path; the cheapest bin is within the scaling factor of the LP
optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import GraphError, TrackapxError
from .graph import (
    Path,
    VertexSelection,
    WeightedGraph,
    assert_forest,
    induced_subgraph,
    normalize_edge,
    unique_forest_path,
)
from . import kernels
from .lp import ONE, ZERO, CoveringLP, FractionalSolution, scale_and_cap, solve


@dataclass(frozen=True)
class McfInstance:
    """Multicut input: a forest with explicit cut paths, or a chordal graph
    with terminal pairs (where many paths may join a pair)."""

    graph: WeightedGraph
    cut_paths: Optional[tuple[Path, ...]] = None
    terminal_pairs: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if (self.cut_paths is None) == (self.terminal_pairs is None):
            raise GraphError(
                "exactly one of cut_paths / terminal_pairs must be given"
            )

    @classmethod
    def forest(
        cls, graph: WeightedGraph, paths: Iterable[Path]
    ) -> "McfInstance":
        assert_forest(graph, "multicut host graph")
        norm = []
        for p in paths:
            expected = unique_forest_path(graph, p.vertices[0], p.vertices[-1])
            if expected is None or expected.canonical() != p.canonical():
                raise GraphError(
                    f"path {p.vertices} is not the unique path between its endpoints"
                )
            norm.append(p.canonical())
        return cls(graph, cut_paths=tuple(sorted(norm)))

    @classmethod
    def chordal(
        cls, graph: WeightedGraph, pairs: Iterable[tuple[int, int]]
    ) -> "McfInstance":
        norm = []
        for s, t in pairs:
            if s == t:
                raise GraphError(f"terminal pair ({s}, {t}) has equal endpoints")
            if not (0 <= s < graph.n and 0 <= t < graph.n):
                raise GraphError(f"terminal pair ({s}, {t}) out of range")
            norm.append(normalize_edge(s, t))
        return cls(graph, terminal_pairs=tuple(sorted(norm)))


def build_mcf_lp(inst: McfInstance) -> CoveringLP:
    """Covering LP of a forest instance: one constraint per cut path."""
    if inst.cut_paths is None:
        raise GraphError("build_mcf_lp needs the forest (explicit paths) variant")
    g = inst.graph
    return CoveringLP.build(
        range(g.n),
        {v: g.weights[v] for v in range(g.n)},
        [p.vertex_set for p in inst.cut_paths],
    )


def forest_distances(
    f: WeightedGraph, xhat: Mapping[int, Fraction]
) -> dict[int, Fraction]:
    """Prefix sums of xhat along tree paths from each component's root
    (lowest index); the root's distance is its own xhat value."""
    assert_forest(f)
    dist: dict[int, Fraction] = {}
    for root in range(f.n):
        if root in dist:
            continue
        dist[root] = Fraction(xhat[root])
        stack = [root]
        while stack:
            u = stack.pop()
            for w in f.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + Fraction(xhat[w])
                    stack.append(w)
    return dist


@dataclass(frozen=True)
class BinGroup:
    """Maximal subinterval of [0,1) whose bins all contain the same
    vertex set."""

    interval: tuple[Fraction, Fraction]
    members: frozenset[int]
    weight: int


def _frac_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


def _bin_member_at(r: Fraction, xv: Fraction, dv: Fraction) -> bool:
    if xv <= 0:
        return False
    if xv >= 1:
        return True
    start = _frac_part(dv - xv)
    end = _frac_part(dv)
    if end - xv >= 0:
        return start <= r < end
    return r >= start or r < end


def _sweep_bin_groups(
    weights: tuple[int, ...],
    xhat: Mapping[int, Fraction],
    dist: Mapping[int, Fraction],
) -> list[BinGroup]:
    cuts = {ZERO}
    for v, xv in xhat.items():
        if ZERO < xv < ONE:
            cuts.add(_frac_part(dist[v] - xv))
            cuts.add(_frac_part(dist[v]))
    points = sorted(cuts)
    raw: list[BinGroup] = []
    for i, left in enumerate(points):
        right = points[i + 1] if i + 1 < len(points) else ONE
        members = frozenset(
            v for v in xhat if _bin_member_at(left, xhat[v], dist[v])
        )
        raw.append(
            BinGroup((left, right), members, sum(weights[v] for v in members))
        )
    merged: list[BinGroup] = []
    for grp in raw:
        if merged and merged[-1].members == grp.members:
            prev = merged.pop()
            grp = BinGroup((prev.interval[0], grp.interval[1]), grp.members, grp.weight)
        merged.append(grp)
    return merged


def enumerate_bin_groups(
    f: WeightedGraph,
    xhat: Mapping[int, Fraction],
    distances: Mapping[int, Fraction],
) -> list[BinGroup]:
    """All bin-groups of a forest instance; the returned intervals
    partition [0,1).  The sweep over interval endpoints is exact; the
    continuous offset is never sampled."""
    assert_forest(f)
    full = {v: Fraction(xhat[v]) for v in range(f.n)}
    return _sweep_bin_groups(f.weights, full, distances)


def _cheapest_group(groups: list[BinGroup]) -> BinGroup:
    return min(groups, key=lambda grp: (grp.weight, grp.interval[0]))


def round_weighted_forest(
    inst: McfInstance, frac: FractionalSolution
) -> VertexSelection:
    """Round an optimal fractional multicut to an integral one of weight at
    most twice the LP optimum: scale by 2, cap at 1, take the cheapest
    bin-group."""
    if inst.cut_paths is None:
        raise GraphError("round_weighted_forest needs the forest variant")
    f = inst.graph
    xhat = scale_and_cap(frac, Fraction(2))
    dist = forest_distances(f, xhat)
    groups = enumerate_bin_groups(f, xhat, dist)
    chosen = _cheapest_group(groups)
    sel = VertexSelection.of(f, chosen.members)
    _check_cuts_paths(inst, sel.members)
    return sel


def _check_cuts_paths(inst: McfInstance, members: frozenset[int]) -> None:
    for p in inst.cut_paths:
        if not (p.vertex_set & members):
            raise TrackapxError(
                f"internal error: rounded cut misses path {p.vertices}"
            )


def solve_unweighted_forest(
    inst: McfInstance, trace: Optional[list] = None
) -> VertexSelection:
    """Exactly optimal multicut for equal vertex weights.

    The LP optimum is integral here; the proof's exchange is applied
    constructively: repeatedly zero a deepest fractional vertex, pushing
    its value onto the parent (capped at 1), until the vector is 0/1.
    Pass ``trace`` to record the vector after every exchange step.
    """
    if inst.cut_paths is None:
        raise GraphError("solve_unweighted_forest needs the forest variant")
    f = inst.graph
    if not f.is_unweighted():
        raise GraphError(
            "weights are not all equal; use round_weighted_forest instead"
        )
    lp = build_mcf_lp(inst)
    sol = solve(lp)
    x = dict(sol.value)

    depth = {}
    parent = {}
    for root in range(f.n):
        if root in depth:
            continue
        depth[root] = 0
        parent[root] = -1
        stack = [root]
        while stack:
            u = stack.pop()
            for w in f.adj[u]:
                if w not in depth:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    stack.append(w)

    while True:
        fractional = [v for v in range(f.n) if ZERO < x[v] < ONE]
        if not fractional:
            break
        v = min(fractional, key=lambda u: (-depth[u], u))
        p = parent[v]
        if p >= 0:
            x[p] = min(x[p] + x[v], ONE)
        x[v] = ZERO
        if trace is not None:
            trace.append(dict(x))

    members = frozenset(v for v in range(f.n) if x[v] == ONE)
    sel = VertexSelection.of(f, members)
    if Fraction(sel.total_weight) != sol.objective_value:
        raise TrackapxError(
            "internal error: exchange changed the objective "
            f"({sel.total_weight} vs LP {sol.objective_value})"
        )
    _check_cuts_paths(inst, members)
    return sel


# ---------------------------------------------------------------------------
# chordal graphs


@dataclass(frozen=True)
class CliqueTree:
    cliques: tuple[frozenset[int], ...]
    edges: frozenset[tuple[int, int]]  # indices into ``cliques``


def perfect_elimination_ordering(g: WeightedGraph) -> list[int]:
    """Maximum-cardinality-search ordering, verified; raises on non-chordal
    input."""
    numbered: list[int] = []
    in_order: set[int] = set()
    score = [0] * g.n
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if u not in in_order),
            key=lambda u: (score[u], -u),
        )
        in_order.add(v)
        numbered.append(v)
        for w in g.adj[v]:
            if w not in in_order:
                score[w] += 1
    peo = list(reversed(numbered))
    pos = {v: i for i, v in enumerate(peo)}
    for i, v in enumerate(peo):
        later = [w for w in g.adj[v] if pos[w] > i]
        if not later:
            continue
        u = min(later, key=lambda w: pos[w])
        rest = set(later) - {u}
        if not rest <= set(g.adj[u]):
            raise GraphError("graph is not chordal (elimination check failed)")
    return peo


def clique_tree(g: WeightedGraph) -> CliqueTree:
    """Clique tree of a chordal graph: nodes are the maximal cliques and,
    for every vertex, the cliques containing it induce a subtree (verified
    after construction)."""
    peo = perfect_elimination_ordering(g)
    pos = {v: i for i, v in enumerate(peo)}
    candidates = []
    for i, v in enumerate(peo):
        candidates.append(frozenset([v] + [w for w in g.adj[v] if pos[w] > i]))
    maximal = sorted(
        {c for c in candidates if not any(c < d for d in candidates)},
        key=lambda c: tuple(sorted(c)),
    )
    idx = range(len(maximal))
    weighted = sorted(
        (
            (-len(maximal[i] & maximal[j]), i, j)
            for i in idx
            for j in idx
            if i < j and maximal[i] & maximal[j]
        ),
    )
    comp = list(idx)

    def find(a):
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    edges = set()
    for _negw, i, j in weighted:
        ri, rj = find(i), find(j)
        if ri != rj:
            comp[ri] = rj
            edges.add((i, j))
    tree = CliqueTree(tuple(maximal), frozenset(edges))
    _verify_subtree_property(g, tree)
    return tree


def _verify_subtree_property(g: WeightedGraph, tree: CliqueTree) -> None:
    nbrs: dict[int, set[int]] = {i: set() for i in range(len(tree.cliques))}
    for i, j in tree.edges:
        nbrs[i].add(j)
        nbrs[j].add(i)
    for v in range(g.n):
        holding = [i for i, c in enumerate(tree.cliques) if v in c]
        if not holding:
            raise TrackapxError(f"internal error: vertex {v} in no clique")
        seen = {holding[0]}
        stack = [holding[0]]
        hold_set = set(holding)
        while stack:
            i = stack.pop()
            for j in nbrs[i]:
                if j in hold_set and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != hold_set:
            raise TrackapxError(
                f"internal error: cliques of vertex {v} not connected in tree"
            )


def _weighted_shortest_path(
    g: WeightedGraph, cost: Mapping[int, Fraction], s: int, t: int
) -> Optional[tuple[Fraction, tuple[int, ...]]]:
    """Minimum of sum(cost over path vertices, endpoints included) over all
    s-t paths, with one witness path; label-correcting, exact rationals."""
    INF = None
    dist: list[Optional[Fraction]] = [INF] * g.n
    par = [-1] * g.n
    dist[s] = Fraction(cost[s])
    changed = True
    while changed:
        changed = False
        for u, v in sorted(g.edges):
            for a, b in ((u, v), (v, u)):
                if dist[a] is None:
                    continue
                cand = dist[a] + cost[b]
                if dist[b] is None or cand < dist[b]:
                    dist[b] = cand
                    par[b] = a
                    changed = True
    if dist[t] is None:
        return None
    seq = [t]
    while seq[-1] != s:
        seq.append(par[seq[-1]])
    return dist[t], tuple(reversed(seq))


def solve_chordal_lp(
    g: WeightedGraph, pairs: Iterable[tuple[int, int]]
) -> FractionalSolution:
    """LP over all terminal-connecting paths, solved by lazy constraint
    generation: separate with an exact vertex-weighted shortest path, add
    the violated path, re-solve."""
    pair_list = sorted(set(normalize_edge(s, t) for s, t in pairs))
    constraints: list[frozenset[int]] = []
    while True:
        lp = CoveringLP.build(
            range(g.n),
            {v: g.weights[v] for v in range(g.n)},
            constraints,
        )
        sol = solve(lp)
        violated: list[frozenset[int]] = []
        for s, t in pair_list:
            hit = _weighted_shortest_path(g, sol.value, s, t)
            if hit is not None and hit[0] < ONE:
                violated.append(frozenset(hit[1]))
        if not violated:
            return sol
        constraints.extend(violated)


def round_chordal(
    g: WeightedGraph,
    pairs: Iterable[tuple[int, int]],
    frac: FractionalSolution,
) -> VertexSelection:
    """4-approximate multicut on a chordal graph: scale by 4, take every
    vertex reaching 1 outright, then bin-round the rest along shortest
    scaled distances."""
    peo_check = perfect_elimination_ordering(g)  # raises on non-chordal input
    del peo_check
    pair_list = sorted(set(normalize_edge(s, t) for s, t in pairs))
    xhat = {v: 4 * frac.value[v] for v in range(g.n)}
    taken = {v for v in range(g.n) if xhat[v] >= 1}

    rest = [v for v in range(g.n) if v not in taken]
    members: set[int] = set(taken)
    if rest:
        h, old_of_new = induced_subgraph(g, rest)
        xh = {i: xhat[old_of_new[i]] for i in range(h.n)}
        dist: dict[int, Fraction] = {}
        comp_seen: set[int] = set()
        for root in range(h.n):
            if root in comp_seen:
                continue
            comp = _component_of(h, root)
            comp_seen.update(comp)
            for v in comp:
                got = _weighted_shortest_path(h, xh, root, v)
                dist[v] = got[0]
        groups = _sweep_bin_groups(h.weights, xh, dist)
        chosen = _cheapest_group(groups)
        members.update(old_of_new[i] for i in chosen.members)

    sel = VertexSelection.of(g, members)
    alive = kernels.full_mask(g.n)
    for v in members:
        alive &= ~(1 << v)
    for s, t in pair_list:
        if s in members or t in members:
            continue
        if (kernels.reachable(g.adj_masks, alive, s) >> t) & 1:
            raise TrackapxError(
                f"internal error: pair ({s}, {t}) not separated by rounding"
            )
    return sel


def _component_of(g: WeightedGraph, root: int) -> list[int]:
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return sorted(seen)


def vc_to_mcf_star(g: WeightedGraph) -> McfInstance:
    """Vertex-cover-preserving star instance: one leaf per vertex of g, a
    center too heavy to ever pick, and one leaf-center-leaf cut path per
    edge of g.  A leaf set is a multicut iff it is a vertex cover of g."""
    center = g.n
    star = WeightedGraph.build(
        g.n + 1,
        [(v, center) for v in range(g.n)],
        tuple(g.weights) + (max(1, sum(g.weights)),),
    )
    paths = [Path((u, center, v)) for u, v in sorted(g.edges)]
    return McfInstance.forest(star, paths)
