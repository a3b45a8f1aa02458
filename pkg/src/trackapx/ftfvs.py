"""Fault tolerant feedback vertex set: every cycle must contain at least
r+1 selected vertices.

Pipeline: bootstrap with a 2-approximate fvs S, enumerate every cycle
meeting S in at most r vertices (materialized as covering groups over the
forest G - S), solve the covering LP exactly, keep the paths whose
fractional mass reaches 1/r, and cut them with a forest multicut.  Also
ships the vertex-cover gadget that makes the problem NP-hard for r >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Iterable, Optional

from . import kernels
from .errors import CapExceeded, GraphError, InfeasibleInstance, TrackapxError
from .fvs import approx_fvs
from .graph import (
    Path,
    PathGroup,
    VertexSelection,
    WeightedGraph,
    induced_subgraph,
    is_acyclic_after_removal,
    normalize_edge,
    shortest_cycle,
)
from .lp import CoveringLP, FractionalSolution, solve, threshold_filter
from .multicut import McfInstance, build_mcf_lp, round_weighted_forest, solve_unweighted_forest

DEFAULT_MAX_R = 4


@dataclass(frozen=True)
class FtfvsInstance:
    graph: WeightedGraph
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise GraphError(f"fault tolerance level must be >= 1, got {self.r}")


@dataclass(frozen=True)
class GroupProvenance:
    """How a covering group was generated: the ordered fvs subset on the
    cycle, the cycle itself (closed sequence), and the non-fvs exclusions."""

    ordered_x: tuple[int, ...]
    cycle: tuple[int, ...]
    excluded: frozenset[int]


@dataclass(frozen=True)
class ConstraintFamily:
    groups: tuple[PathGroup, ...]
    provenance: tuple[GroupProvenance, ...]

    def __post_init__(self):
        if len(self.groups) != len(self.provenance):
            raise TrackapxError("groups and provenance must align")


def check_feasible(inst: FtfvsInstance) -> bool:
    """A solution can exist iff the graph is acyclic or its girth exceeds r
    (a shorter cycle cannot contain r+1 distinct vertices)."""
    cyc = shortest_cycle(inst.graph)
    return cyc is None or len(cyc.vertices) > inst.r


def _forest_path(
    g: WeightedGraph, blocked: frozenset[int], a: int, b: int
) -> Optional[tuple[int, ...]]:
    """Unique a-b path avoiding ``blocked`` (the graph minus blocked must be
    a forest for uniqueness; callers guarantee it)."""
    if a in blocked or b in blocked:
        return None
    if a == b:
        return (a,)
    parent = {a: -1}
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for w in g.adj[x]:
            if w not in blocked and w not in parent:
                parent[w] = x
                stack.append(w)
    if b not in parent:
        return None
    seq = [b]
    while seq[-1] != a:
        seq.append(parent[seq[-1]])
    return tuple(reversed(seq))


def enumerate_family(
    inst: FtfvsInstance, s: VertexSelection, max_r: int = DEFAULT_MAX_R
) -> ConstraintFamily:
    """Covering groups: for every cycle C meeting the fvs S in k <= r
    vertices and every choice of r-k non-fvs exclusions Y on C, one group
    holding the components of C minus the distinguished vertices.

    Cycles are found by walking every ordering of every small fvs subset
    and joining consecutive subset vertices either by a direct edge or by
    the unique forest path between chosen neighbors outside S.
    """
    r = inst.r
    if r > max_r:
        raise CapExceeded(
            f"enumeration is n^O(r); r={r} exceeds the configured cap {max_r}"
        )
    g = inst.graph
    if not is_acyclic_after_removal(g, s.members):
        raise GraphError("the provided selection is not a feedback vertex set")
    s_set = frozenset(s.members)
    s_sorted = sorted(s_set)

    cycles: dict[tuple, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for k in range(1, r + 1):
        for x_subset in combinations(s_sorted, k):
            for ordering in permutations(x_subset):
                _collect_cycles(g, s_set, ordering, cycles)

    # deterministic order over distinct cycles
    order = sorted(cycles, key=lambda key: cycles[key][1])
    groups: dict[frozenset[Path], GroupProvenance] = {}
    for key in order:
        ordered_x, cycle_seq = cycles[key]
        non_s = [v for v in cycle_seq if v not in s_set]
        need = r - len(ordered_x)
        for y in combinations(non_s, need):
            removed = set(ordered_x) | set(y)
            comp_paths = _cycle_components(cycle_seq, removed)
            if not comp_paths:
                raise InfeasibleInstance(
                    "a cycle of length <= r admits no solution",
                    witness=Path(cycle_seq),
                )
            group = PathGroup.of(Path(c) for c in comp_paths)
            if group.paths not in groups:
                groups[group.paths] = GroupProvenance(
                    ordered_x, cycle_seq, frozenset(y)
                )
    ordered_groups = sorted(groups, key=lambda ps: tuple(sorted(p.vertices for p in ps)))
    return ConstraintFamily(
        tuple(PathGroup(ps) for ps in ordered_groups),
        tuple(groups[ps] for ps in ordered_groups),
    )


def _collect_cycles(g, s_set, ordering, cycles) -> None:
    """DFS over per-connection segment choices for one ordering of the fvs
    subset; records every distinct induced cycle."""
    k = len(ordering)
    options: list[list[Optional[tuple[int, ...]]]] = []
    for i in range(k):
        vi, vj = ordering[i], ordering[(i + 1) % k]
        opts: list[Optional[tuple[int, ...]]] = []
        if k >= 2 and g.has_edge(vi, vj):
            opts.append(None)  # direct edge connection
        for f in g.adj[vi]:
            if f in s_set:
                continue
            for gg in g.adj[vj]:
                if gg in s_set:
                    continue
                if k == 1 and f == gg:
                    continue  # would close a 2-cycle
                seg = _forest_path(g, s_set, f, gg)
                if seg is not None:
                    opts.append(seg)
        options.append(opts)

    chosen: list[Optional[tuple[int, ...]]] = [None] * k
    used_mask = [0]

    def seg_mask(seg) -> int:
        m = 0
        for v in seg:
            m |= 1 << v
        return m

    def rec(i: int) -> None:
        if i == k:
            if k == 2 and chosen[0] is None and chosen[1] is None:
                return
            seq: list[int] = []
            for j in range(k):
                seq.append(ordering[j])
                if chosen[j] is not None:
                    seq.extend(chosen[j])
            key = (
                frozenset(seq),
                frozenset(
                    normalize_edge(seq[a], seq[(a + 1) % len(seq)])
                    for a in range(len(seq))
                ),
            )
            if key not in cycles:
                cycles[key] = (ordering, tuple(seq))
            return
        for seg in options[i]:
            if seg is None:
                rec(i + 1)
                continue
            m = seg_mask(seg)
            if m & used_mask[0]:
                continue
            used_mask[0] |= m
            chosen[i] = seg
            rec(i + 1)
            chosen[i] = None
            used_mask[0] &= ~m

    rec(0)


def _cycle_components(cycle_seq: tuple[int, ...], removed: set[int]) -> list[tuple[int, ...]]:
    """Components of the cycle minus the removed vertices; the sequence
    starts at a removed vertex (an fvs vertex), so a linear split is a
    circular one."""
    comps: list[tuple[int, ...]] = []
    run: list[int] = []
    for v in cycle_seq:
        if v in removed:
            if run:
                comps.append(tuple(run))
                run = []
        else:
            run.append(v)
    if run:
        comps.append(tuple(run))
    return comps


def build_lp_s_tuples(
    inst: FtfvsInstance, s: VertexSelection, fam: ConstraintFamily
) -> CoveringLP:
    """One covering constraint per group, over the union of its paths;
    variables are the non-fvs vertices, weighted as in the graph."""
    return group_cover_lp(inst.graph, s, fam.groups)


def group_cover_lp(
    g: WeightedGraph, s: VertexSelection, groups: Iterable[PathGroup]
) -> CoveringLP:
    variables = [v for v in range(g.n) if v not in s.members]
    return CoveringLP.build(
        variables,
        {v: g.weights[v] for v in variables},
        [grp.union_vertices for grp in groups],
    )


@dataclass(frozen=True)
class FtfvsOutcome:
    selection: VertexSelection
    lp_optimum: Fraction
    family: ConstraintFamily
    filtered: tuple[Path, ...]
    bootstrap: VertexSelection


def run_ftfvs_pipeline(inst: FtfvsInstance, max_r: int = DEFAULT_MAX_R) -> FtfvsOutcome:
    g, r = inst.graph, inst.r
    witness = shortest_cycle(g)
    if witness is not None and len(witness.vertices) <= r:
        raise InfeasibleInstance(
            f"girth {len(witness.vertices)} <= r={r}: no solution exists",
            witness=witness,
        )
    s = approx_fvs(g)
    fam = enumerate_family(inst, s, max_r=max_r)
    if not fam.groups:
        # no cycle meets S in fewer than r+1 vertices, S alone suffices
        out = s
        lp_opt = Fraction(0)
        filtered: tuple[Path, ...] = ()
    else:
        lp = build_lp_s_tuples(inst, s, fam)
        frac = solve(lp)
        lp_opt = frac.objective_value
        kept = threshold_filter(frac, fam.groups, Fraction(1, r))
        extra = _cut_paths_on_forest(g, s, kept)
        out = VertexSelection.of(g, s.members | extra)
        filtered = tuple(kept)
    if not verify_ftfvs(inst, out):
        raise TrackapxError("internal error: pipeline output fails verification")
    return FtfvsOutcome(out, lp_opt, fam, filtered, s)


def _cut_paths_on_forest(
    g: WeightedGraph, s: VertexSelection, paths: list[Path]
) -> frozenset[int]:
    """Multicut the filtered paths on the forest G - S; exact when the
    forest weights are all equal, bin rounding otherwise."""
    if not paths:
        return frozenset()
    keep = [v for v in range(g.n) if v not in s.members]
    forest, old_of_new = induced_subgraph(g, keep)
    new_of_old = {old: new for new, old in enumerate(old_of_new)}
    mapped = [Path(tuple(new_of_old[v] for v in p.vertices)) for p in paths]
    mcf = McfInstance.forest(forest, mapped)
    if forest.is_unweighted():
        cut = solve_unweighted_forest(mcf)
    else:
        cut = round_weighted_forest(mcf, solve(build_mcf_lp(mcf)))
    return frozenset(old_of_new[v] for v in cut.members)


def solve_ftfvs(inst: FtfvsInstance, max_r: int = DEFAULT_MAX_R) -> VertexSelection:
    """(2 + r)-approximate solution on equal weights, (2 + 2r) otherwise;
    raises InfeasibleInstance (with a witness cycle) when the girth is
    at most r."""
    return run_ftfvs_pipeline(inst, max_r=max_r).selection


def verify_ftfvs(
    inst: FtfvsInstance, cand: VertexSelection, max_checks: int = 10**6
) -> bool:
    """Does every cycle contain at least r+1 candidate vertices?

    A violating cycle meets the candidate set in some T with |T| <= r, so
    it survives in the graph induced on (V - cand) + T; check all such T.
    """
    g, r = inst.graph, inst.r
    members = sorted(cand.members)
    checks = sum(comb(len(members), i) for i in range(min(r, len(members)) + 1))
    if checks > max_checks:
        raise CapExceeded(
            f"verification needs {checks} subset checks (cap {max_checks})"
        )
    base = kernels.full_mask(g.n)
    for v in members:
        base &= ~(1 << v)
    masks = g.adj_masks
    for size in range(min(r, len(members)) + 1):
        for t in combinations(members, size):
            alive = base
            for v in t:
                alive |= 1 << v
            if not kernels.is_forest(masks, alive):
                return False
    return True


def gen_hardness_gadget(
    vc_graph: WeightedGraph, k: int, r: int
) -> tuple[FtfvsInstance, int]:
    """The vertex-cover reduction gadget: replace each edge by a chain of
    length r with two attached chains closing cycles of length exactly r+1,
    then append an (r+1)-cycle whose first vertex joins every original
    vertex.  Returns the unweighted instance and the matching budget k'."""
    if r < 2:
        raise GraphError("the gadget construction requires r >= 2")
    n, m = vc_graph.n, vc_graph.m
    ell = (r + 1) // 2 + 1  # ceil(r/2) + 1
    edges: list[tuple[int, int]] = []
    nxt = n

    def fresh(count: int) -> list[int]:
        nonlocal nxt
        out = list(range(nxt, nxt + count))
        nxt += count
        return out

    def chain(vs: list[int]) -> None:
        edges.extend((vs[i], vs[i + 1]) for i in range(len(vs) - 1))

    for u, v in sorted(vc_graph.edges):
        a = fresh(r - 1)
        chain([u] + a + [v])
        b = fresh(ell)
        chain(b)
        c = fresh(ell)
        chain(c)
        edges.append((a[0], b[0]))
        edges.append((a[r // 2 - 1], b[ell - 1]))
        edges.append((a[(r + 1) // 2 - 1], c[0]))
        edges.append((a[r - 2], c[ell - 1]))
    x = fresh(r + 1)
    chain(x)
    edges.append((x[0], x[-1]))
    edges.extend((x[0], v) for v in range(n))

    gadget = WeightedGraph.build(nxt, edges)
    kprime = k + r + 1 + m * (2 * ell + r - 1)
    girth_witness = shortest_cycle(gadget)
    if girth_witness is not None and len(girth_witness.vertices) < r + 1:
        raise TrackapxError("internal error: gadget girth below r+1")
    return FtfvsInstance(gadget, r), kprime
