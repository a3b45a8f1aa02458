"""Factor-2 feedback vertex set approximation (local-ratio schema).

Round structure: prune degree <= 1 vertices, then either lower weights
uniformly along a semidisjoint cycle (a cycle with at most one vertex of
degree > 2) or proportionally to degree minus one on the whole remaining
core; vertices hitting weight zero enter the solution.  A reverse-delete
sweep at the end makes the output inclusion-minimal.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import VertexSelection, WeightedGraph, is_acyclic_after_removal


def approx_fvs(g: WeightedGraph) -> VertexSelection:
    """Feedback vertex set of weight at most twice the optimum."""
    adj: list[set[int]] = [set(a) for a in g.adj]
    alive: set[int] = set(range(g.n))
    w = [Fraction(x) for x in g.weights]

    def drop(v: int) -> None:
        alive.discard(v)
        for u in adj[v]:
            adj[u].discard(v)
        adj[v] = set()

    def cleanup() -> None:
        queue = [v for v in sorted(alive) if len(adj[v]) <= 1]
        while queue:
            v = queue.pop()
            if v not in alive:
                continue
            nbrs = list(adj[v])
            drop(v)
            queue.extend(u for u in nbrs if len(adj[u]) <= 1)

    picked_order: list[int] = []
    cleanup()
    while alive:
        cycle = _semidisjoint_cycle(adj, alive)
        if cycle is not None:
            gamma = min(w[v] for v in cycle)
            for v in cycle:
                w[v] -= gamma
        else:
            gamma = min(w[v] / (len(adj[v]) - 1) for v in sorted(alive))
            for v in alive:
                w[v] -= gamma * (len(adj[v]) - 1)
        zeros = [v for v in sorted(alive) if w[v] == 0]
        for v in zeros:
            picked_order.append(v)
            drop(v)
        cleanup()

    kept = set(picked_order)
    for v in reversed(picked_order):
        if is_acyclic_after_removal(g, kept - {v}):
            kept.remove(v)
    return VertexSelection.of(g, kept)


def _semidisjoint_cycle(adj: list[set[int]], alive: set[int]):
    """A cycle whose vertices all have degree 2 except at most one, or None.

    Scans components of the degree-2 core in ascending vertex order: a
    component that is itself a cycle qualifies, as does a chain whose two
    endpoints share a neighboring junction of higher degree.
    """
    deg2 = {v for v in alive if len(adj[v]) == 2}
    seen: set[int] = set()
    for start in sorted(deg2):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for x in adj[u]:
                if x in deg2 and x not in seen:
                    seen.add(x)
                    comp.append(x)
                    stack.append(x)
        comp_set = set(comp)
        inner_edges = sum(len(adj[v] & comp_set) for v in comp) // 2
        if inner_edges == len(comp):
            return sorted(comp)  # the component is a cycle on its own
        ends = sorted(v for v in comp if len(adj[v] & comp_set) <= 1)
        if len(ends) == 2:
            joint = (adj[ends[0]] - comp_set) & (adj[ends[1]] - comp_set)
            junctions = sorted(u for u in joint if len(adj[u]) > 2)
            if junctions:
                return sorted(comp + [junctions[0]])
        elif len(ends) == 1:
            # single degree-2 vertex whose both edges go to one junction is
            # impossible in a simple graph; nothing to do
            pass
    return None
