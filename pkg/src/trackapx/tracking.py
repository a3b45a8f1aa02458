"""Tracking paths: place a minimum-weight set of trackers so the ordered
tracker subsequence identifies every source-target path uniquely.

The approximation: preprocess (every element must lie on some s-t path),
bootstrap with a 2-approximate fvs S, early-exit if S already tracks,
otherwise enumerate the cycles meeting S in one or two vertices that admit
local access paths, and cut the promising halves (fractional mass >= 1/2
under the covering LP) with a forest multicut.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import kernels
from .errors import CapExceeded, TrackapxError
from .fvs import approx_fvs
from .ftfvs import (
    ConstraintFamily,
    GroupProvenance,
    _cut_paths_on_forest,
    _cycle_components,
    _forest_path,
    group_cover_lp,
)
from .graph import Path, PathGroup, VertexSelection, WeightedGraph, normalize_edge
from .lp import solve, threshold_filter
from .preprocess import TrackingInstance, is_local_st_pair, reduce_with_mapping

DEFAULT_MAX_PATHS = 2_000_000


@dataclass(frozen=True)
class TrackerSequence:
    """Trackers of one path, in path order."""

    sequence: tuple[int, ...]

    @classmethod
    def of(cls, path: Path, trackers: frozenset[int]) -> "TrackerSequence":
        return cls(tuple(v for v in path.vertices if v in trackers))


@dataclass(frozen=True)
class TrackingViolation:
    """Two same-signature paths plus the cycle and access pair they induce."""

    path_a: Path
    path_b: Path
    cycle: tuple[int, ...]
    local_pair: tuple[int, int]


def _all_st_paths(inst: TrackingInstance, max_paths: int) -> list[tuple[int, ...]]:
    try:
        return kernels.st_paths(
            inst.graph.adj_masks, inst.source, inst.target, cap=max_paths
        )
    except CapExceeded as exc:
        raise CapExceeded(
            f"tracking verification infeasible: {exc}"
        ) from exc


def is_tracking_set(
    inst: TrackingInstance,
    cand: VertexSelection,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> bool:
    """Exhaustive check that all s-t paths get distinct tracker sequences.

    Errors out (never silently passes) when the path count exceeds the cap.
    """
    members = cand.members
    seen: set[tuple[int, ...]] = set()
    for p in _all_st_paths(inst, max_paths):
        sig = tuple(v for v in p if v in members)
        if sig in seen:
            return False
        seen.add(sig)
    return True


def tracking_violation_witness(
    inst: TrackingInstance,
    cand: VertexSelection,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> Optional[TrackingViolation]:
    """A certificate for a failed tracking set: two paths with the same
    tracker sequence whose difference is a cycle with a local s-t pair
    untouched by trackers outside the pair.  None iff ``cand`` tracks."""
    members = cand.members
    by_sig: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for p in _all_st_paths(inst, max_paths):
        by_sig.setdefault(tuple(v for v in p if v in members), []).append(p)
    for sig in sorted(by_sig):
        bucket = by_sig[sig]
        for i in range(len(bucket)):
            for j in range(i + 1, len(bucket)):
                hit = _extract_cycle_certificate(inst, members, bucket[i], bucket[j])
                if hit is not None:
                    return hit
    return None


def _extract_cycle_certificate(inst, members, pa, pb) -> Optional[TrackingViolation]:
    pos_b = {v: idx for idx, v in enumerate(pb)}
    for ia, a in enumerate(pa):
        if a not in pos_b:
            continue
        for ib in range(ia + 1, len(pa)):
            b = pa[ib]
            if b not in pos_b or pos_b[b] <= pos_b[a]:
                continue
            seg_a = pa[ia : ib + 1]
            seg_b = pb[pos_b[a] : pos_b[b] + 1]
            if seg_a == seg_b:
                continue
            interior_a = set(seg_a[1:-1])
            interior_b = set(seg_b[1:-1])
            if interior_a & interior_b:
                continue
            cycle_vertices = set(seg_a) | set(seg_b)
            if members & (cycle_vertices - {a, b}):
                continue
            cycle_seq = seg_a + tuple(reversed(seg_b[1:-1]))
            if is_local_st_pair(inst, cycle_vertices, a, b) or is_local_st_pair(
                inst, cycle_vertices, b, a
            ):
                return TrackingViolation(
                    Path(pa), Path(pb), cycle_seq, (a, b)
                )
    return None


def provenance_pair(prov: GroupProvenance) -> tuple[int, int]:
    """The distinguished (a, b) cycle vertices recorded by the tracking
    enumerators."""
    if len(prov.ordered_x) == 2:
        return prov.ordered_x[0], prov.ordered_x[1]
    (b,) = prov.excluded
    return prov.ordered_x[0], b


def _add_group(
    groups: dict, inst: TrackingInstance, cycle_seq: tuple[int, ...],
    a: int, b: int, prov: GroupProvenance,
) -> None:
    comp_paths = _cycle_components(cycle_seq, {a, b})
    group = PathGroup.of(Path(c) for c in comp_paths)
    if group.paths not in groups:
        groups[group.paths] = prov


def enumerate_one_fvs_cycles(
    inst: TrackingInstance, s_fvs: VertexSelection
) -> ConstraintFamily:
    """Constraint groups from cycles meeting the fvs in exactly one vertex:
    the fvs vertex plus the unique forest path joining two of its
    neighbors, admitted when some second cycle vertex forms a local
    s-t pair with it (in either orientation)."""
    g = inst.graph
    s_set = frozenset(s_fvs.members)
    seen_cycles: set[tuple] = set()
    groups: dict[frozenset[Path], GroupProvenance] = {}
    for a in sorted(s_set):
        nbrs = [f for f in g.adj[a] if f not in s_set]
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                seg = _forest_path(g, s_set, nbrs[i], nbrs[j])
                if seg is None:
                    continue
                cycle_seq = (a,) + seg
                key = _cycle_key(cycle_seq, frozenset([a]))
                if key in seen_cycles:
                    continue
                seen_cycles.add(key)
                for b in sorted(set(cycle_seq) - {a}):
                    if is_local_st_pair(inst, set(cycle_seq), a, b) or \
                            is_local_st_pair(inst, set(cycle_seq), b, a):
                        _add_group(
                            groups, inst, cycle_seq, a, b,
                            GroupProvenance((a,), cycle_seq, frozenset([b])),
                        )
    return _family_from(groups)


def enumerate_two_fvs_cycles(
    inst: TrackingInstance, s_fvs: VertexSelection
) -> ConstraintFamily:
    """Constraint groups from cycles meeting the fvs in exactly two
    vertices a, b: two disjoint a-b segments (forest paths through chosen
    neighbors, or the direct edge), admitted under the local-pair test."""
    g = inst.graph
    s_set = frozenset(s_fvs.members)
    members = sorted(s_set)
    seen_cycles: set[tuple] = set()
    groups: dict[frozenset[Path], GroupProvenance] = {}
    for ia in range(len(members)):
        for ib in range(ia + 1, len(members)):
            a, b = members[ia], members[ib]
            segments: list[Optional[tuple[int, ...]]] = []
            if g.has_edge(a, b):
                segments.append(None)
            seg_seen: set[tuple[int, ...]] = set()
            for f in g.adj[a]:
                if f in s_set:
                    continue
                for gg in g.adj[b]:
                    if gg in s_set:
                        continue
                    seg = _forest_path(g, s_set, f, gg)
                    if seg is not None and seg not in seg_seen:
                        seg_seen.add(seg)
                        segments.append(seg)
            for i in range(len(segments)):
                for j in range(i + 1, len(segments)):
                    s1, s2 = segments[i], segments[j]
                    if s1 is not None and s2 is not None and set(s1) & set(s2):
                        continue
                    first = s1 if s1 is not None else ()
                    second = s2 if s2 is not None else ()
                    cycle_seq = (a,) + tuple(first) + (b,) + tuple(reversed(second))
                    key = _cycle_key(cycle_seq, frozenset([a, b]))
                    if key in seen_cycles:
                        continue
                    seen_cycles.add(key)
                    if is_local_st_pair(inst, set(cycle_seq), a, b) or \
                            is_local_st_pair(inst, set(cycle_seq), b, a):
                        _add_group(
                            groups, inst, cycle_seq, a, b,
                            GroupProvenance((a, b), cycle_seq, frozenset()),
                        )
    return _family_from(groups)


def _cycle_key(cycle_seq: tuple[int, ...], pair: frozenset[int]) -> tuple:
    n = len(cycle_seq)
    return (
        frozenset(cycle_seq),
        frozenset(
            normalize_edge(cycle_seq[i], cycle_seq[(i + 1) % n]) for i in range(n)
        ),
        pair,
    )


def _family_from(groups: dict) -> ConstraintFamily:
    ordered = sorted(groups, key=lambda ps: tuple(sorted(p.vertices for p in ps)))
    return ConstraintFamily(
        tuple(PathGroup(ps) for ps in ordered),
        tuple(groups[ps] for ps in ordered),
    )


@dataclass(frozen=True)
class TrackingOutcome:
    selection: VertexSelection
    lp_optimum: Fraction
    family: ConstraintFamily
    filtered: tuple[Path, ...]
    bootstrap: VertexSelection
    early_exit: bool
    reduced: TrackingInstance
    reduced_to_original: tuple[int, ...]


def run_tracking_pipeline(
    inst: TrackingInstance, max_paths: int = DEFAULT_MAX_PATHS
) -> TrackingOutcome:
    red, old_of_new = reduce_with_mapping(inst)
    s = approx_fvs(red.graph)
    empty_family = ConstraintFamily((), ())

    if is_tracking_set(red, s, max_paths=max_paths):
        sel = VertexSelection.of(inst.graph, (old_of_new[v] for v in s.members))
        return TrackingOutcome(
            sel, Fraction(0), empty_family, (), s, True, red, old_of_new
        )

    fam1 = enumerate_one_fvs_cycles(red, s)
    fam2 = enumerate_two_fvs_cycles(red, s)
    merged: dict[frozenset[Path], GroupProvenance] = {}
    for fam in (fam1, fam2):
        for grp, prov in zip(fam.groups, fam.provenance):
            if grp.paths not in merged:
                merged[grp.paths] = prov
    fam = _family_from(merged)

    lp = group_cover_lp(red.graph, s, fam.groups)
    frac = solve(lp)
    kept = threshold_filter(frac, fam.groups, Fraction(1, 2))
    extra = _cut_paths_on_forest(red.graph, s, kept)
    tracked = VertexSelection.of(red.graph, s.members | extra)
    if not is_tracking_set(red, tracked, max_paths=max_paths):
        raise TrackapxError("internal error: pipeline output is not a tracking set")
    sel = VertexSelection.of(inst.graph, (old_of_new[v] for v in tracked.members))
    return TrackingOutcome(
        sel, frac.objective_value, fam, tuple(kept), s, False, red, old_of_new
    )


def solve_tracking(
    inst: TrackingInstance, max_paths: int = DEFAULT_MAX_PATHS
) -> VertexSelection:
    """2(1+mu)-approximate tracking set: factor 4 on equal weights, 6
    otherwise.  Raises when source and target are disconnected."""
    return run_tracking_pipeline(inst, max_paths=max_paths).selection


def lower_bound_check(inst: TrackingInstance, t_star_weight: int) -> bool:
    """Sanity bounds: the covering-LP optimum and the exact fvs optimum
    never exceed the optimal tracking weight."""
    from .oracles import exact_fvs

    red, _ = reduce_with_mapping(inst)
    s = approx_fvs(red.graph)
    fam1 = enumerate_one_fvs_cycles(red, s)
    fam2 = enumerate_two_fvs_cycles(red, s)
    groups = tuple(dict.fromkeys(fam1.groups + fam2.groups))
    lp_opt = solve(group_cover_lp(red.graph, s, groups)).objective_value
    fvs_opt = exact_fvs(red.graph).total_weight
    return lp_opt <= t_star_weight and fvs_opt <= t_star_weight
