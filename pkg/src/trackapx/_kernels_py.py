"""Pure-Python enumeration kernels.

Reference implementations of the hot inner loops (simple-path and
simple-cycle enumeration, forest checks, reachability, disjoint-path
search) over bitmask adjacency.  Python integers serve as bitsets, so
these work for any vertex count; the compiled twin in ``_ckernels``
covers the common case of at most 64 vertices.
"""

from __future__ import annotations

from .errors import CapExceeded


def is_forest(masks, alive: int) -> bool:
    """True iff the subgraph induced on the ``alive`` vertex set is acyclic."""
    n = len(masks)
    seen = 0
    for root in range(n):
        rbit = 1 << root
        if not (alive & rbit) or (seen & rbit):
            continue
        seen |= rbit
        stack = [(root, -1)]
        while stack:
            u, par = stack.pop()
            nbrs = masks[u] & alive
            while nbrs:
                w = (nbrs & -nbrs).bit_length() - 1
                nbrs &= nbrs - 1
                if w == par:
                    par = -1  # skip the parent edge exactly once
                    continue
                wbit = 1 << w
                if seen & wbit:
                    return False
                seen |= wbit
                stack.append((w, u))
    return True


def reachable(masks, alive: int, src: int) -> int:
    """Bitmask of vertices reachable from src inside the alive set
    (0 when src itself is not alive)."""
    sbit = 1 << src
    if not (alive & sbit):
        return 0
    seen = sbit
    frontier = sbit
    while frontier:
        nxt = 0
        f = frontier
        while f:
            u = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= masks[u] & alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def st_paths(masks, s: int, t: int, alive: int, cap: int) -> list[tuple[int, ...]]:
    """All simple s-t paths inside the alive set, in lexicographic order.

    Raises CapExceeded as soon as more than ``cap`` paths are produced.
    """
    n = len(masks)
    if not (alive >> s) & 1 or not (alive >> t) & 1:
        return []
    if s == t:
        return [(s,)]
    out: list[tuple[int, ...]] = []
    path = [s]
    used = 1 << s
    # cursor stack of next-neighbor indices for lexicographic order
    iters = [_ascending(masks[s] & alive)]
    while iters:
        it = iters[-1]
        w = next(it, -1)
        if w < 0:
            iters.pop()
            used &= ~(1 << path.pop())
            continue
        if used >> w & 1:
            continue
        if w == t:
            out.append(tuple(path) + (t,))
            if len(out) > cap:
                raise CapExceeded(
                    f"more than {cap} simple s-t paths; raise the cap to proceed"
                )
            continue
        path.append(w)
        used |= 1 << w
        iters.append(_ascending(masks[w] & alive))
    return out


def _ascending(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


def simple_cycles(masks, alive: int, cap: int) -> list[tuple[int, ...]]:
    """All simple cycles of the alive-induced subgraph, each reported once
    in canonical form: smallest vertex first, second vertex smaller than
    the last.  Raises CapExceeded past ``cap`` cycles."""
    n = len(masks)
    out: list[tuple[int, ...]] = []
    for root in range(n):
        if not (alive >> root) & 1:
            continue
        # cycles whose minimum vertex is `root`: DFS through vertices > root
        above = alive & ~((1 << (root + 1)) - 1)
        path = [root]
        used = 1 << root
        iters = [_ascending(masks[root] & above)]
        while iters:
            it = iters[-1]
            w = next(it, -1)
            if w < 0:
                iters.pop()
                used &= ~(1 << path.pop())
                continue
            if used >> w & 1:
                continue
            closes = (masks[w] >> root) & 1
            if closes and len(path) >= 2 and path[1] < w:
                out.append(tuple(path) + (w,))
                if len(out) > cap:
                    raise CapExceeded(
                        f"more than {cap} simple cycles; raise the cap to proceed"
                    )
            path.append(w)
            used |= 1 << w
            iters.append(_ascending(masks[w] & above))
    return out


def disjoint_paths(masks, alive: int, a1: int, b1: int, a2: int, b2: int) -> bool:
    """Do an a1-b1 path and an a2-b2 path exist sharing no vertex?

    Exhaustive: depth-first over simple a1-b1 paths, pruning any branch
    whose partial path already disconnects a2 from b2.  Single-vertex
    paths (a1 == b1 or a2 == b2) are legal.
    """
    for v in (a1, b1, a2, b2):
        if not (alive >> v) & 1:
            return False
    if a1 == b1:
        rest = alive & ~(1 << a1)
        return bool((reachable(masks, rest, a2) >> b2) & 1)
    if a2 == b2:
        rest = alive & ~(1 << a2)
        return bool((reachable(masks, rest, a1) >> b1) & 1)

    allowed = alive & ~(1 << a2) & ~(1 << b2)
    if not ((allowed >> a1) & 1 and (allowed >> b1) & 1):
        return False

    path_mask = 1 << a1
    iters = [_ascending(masks[a1] & allowed)]
    stack = [a1]
    while iters:
        # prune: the second pair must stay connected around the partial path
        it = iters[-1]
        w = next(it, -1)
        if w < 0:
            iters.pop()
            path_mask &= ~(1 << stack.pop())
            continue
        if (path_mask >> w) & 1:
            continue
        if w == b1:
            if (reachable(masks, alive & ~(path_mask | 1 << b1), a2) >> b2) & 1:
                return True
            continue
        new_mask = path_mask | (1 << w)
        if not (reachable(masks, alive & ~new_mask, a2) >> b2) & 1:
            continue  # extending through w already cuts the second pair
        path_mask = new_mask
        stack.append(w)
        iters.append(_ascending(masks[w] & allowed))
    return False
