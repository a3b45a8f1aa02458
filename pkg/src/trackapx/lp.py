"""Exact-rational covering LPs and a deterministic simplex solver.

The only LP shape the pipelines need is

    minimize    sum_v c_v * x_v         (c_v >= 0)
    subject to  sum_{v in C} x_v >= 1   for each constraint set C
                0 <= x_v <= 1

All arithmetic is over ``fractions.Fraction``; every threshold comparison
downstream (1/2, 1/r) is exact, so no epsilon appears anywhere.  Setting
every variable to 1 is always feasible, which yields a ready-made starting
basis and makes a feasibility phase unnecessary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import TrackapxError
from .graph import Path, PathGroup

ZERO = Fraction(0)
ONE = Fraction(1)


class LPError(TrackapxError):
    pass


@dataclass(frozen=True)
class CoveringLP:
    variables: tuple[int, ...]
    objective: dict[int, Fraction]
    constraints: tuple[frozenset[int], ...]

    @classmethod
    def build(
        cls,
        variables: Iterable[int],
        objective: Mapping[int, int | Fraction],
        constraints: Iterable[Iterable[int]],
    ) -> "CoveringLP":
        vs = tuple(sorted(set(variables)))
        var_set = set(vs)
        obj = {v: Fraction(objective[v]) for v in vs}
        for v, c in obj.items():
            if c < 0:
                raise LPError(f"negative objective coefficient for variable {v}")
        seen: set[frozenset[int]] = set()
        cons: list[frozenset[int]] = []
        for c in constraints:
            fs = frozenset(c)
            if not fs:
                raise LPError("empty covering constraint makes the LP infeasible")
            if not fs <= var_set:
                raise LPError(f"constraint {sorted(fs)} uses unknown variables")
            if fs not in seen:
                seen.add(fs)
                cons.append(fs)
        cons.sort(key=lambda fs: tuple(sorted(fs)))
        return cls(vs, obj, tuple(cons))


@dataclass(frozen=True)
class FractionalSolution:
    value: dict[int, Fraction]
    objective_value: Fraction

    def check(self, lp: CoveringLP) -> None:
        for v in lp.variables:
            x = self.value[v]
            if not (ZERO <= x <= ONE):
                raise LPError(f"value x_{v} = {x} outside [0, 1]")
        for c in lp.constraints:
            if sum(self.value[v] for v in c) < ONE:
                raise LPError(f"constraint {sorted(c)} violated")
        recomputed = sum(
            (lp.objective[v] * self.value[v] for v in lp.variables), ZERO
        )
        if recomputed != self.objective_value:
            raise LPError("objective value does not match the assignment")


def _essential_constraints(cons: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """Drop constraints that are supersets of another: with x >= 0, covering
    a subset implies covering the superset, so only minimal sets matter."""
    by_size = sorted(cons, key=len)
    kept: list[frozenset[int]] = []
    for c in by_size:
        if not any(k <= c for k in kept):
            kept.append(c)
    return kept


def solve(lp: CoveringLP) -> FractionalSolution:
    """Optimal basic solution of the covering LP.

    Textbook primal simplex with Bland's rule, started from the all-ones
    point (basis: the x's in their bound rows, one surplus per covering
    row).  Deterministic for a fixed input.
    """
    cons = _essential_constraints(lp.constraints)
    support = sorted(set().union(*cons)) if cons else []
    # variables outside every constraint sit at 0 in any optimum (c >= 0)
    values: dict[int, Fraction] = {v: ZERO for v in lp.variables}
    if support:
        for v, x in _simplex_min_cover(
            support, [lp.objective[v] for v in support], cons
        ).items():
            values[v] = x
    objective = sum((lp.objective[v] * values[v] for v in lp.variables), ZERO)
    sol = FractionalSolution(values, objective)
    sol.check(lp)
    return sol


def _simplex_min_cover(
    support: list[int],
    costs: list[Fraction],
    cons: list[frozenset[int]],
) -> dict[int, Fraction]:
    n = len(support)
    m = len(cons)
    col_of = {v: j for j, v in enumerate(support)}
    total_cols = 2 * n + m  # x_0..x_{n-1}, s_0..s_{m-1}, t_0..t_{n-1}

    # rows 0..m-1: covering rows, basic s_i;  rows m..m+n-1: bound rows, basic x_j
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    for i, c in enumerate(cons):
        row = [ZERO] * total_cols
        row[n + i] = ONE
        for v in c:
            row[n + m + col_of[v]] = ONE  # t-column of v
        rows.append(row)
        rhs.append(Fraction(len(c) - 1))
        basis.append(n + i)
    for j in range(n):
        row = [ZERO] * total_cols
        row[j] = ONE
        row[n + m + j] = ONE
        rows.append(row)
        rhs.append(ONE)
        basis.append(j)

    # reduced costs: basic x's eliminated, leaving -c_j on each t_j
    red = [ZERO] * total_cols
    for j in range(n):
        red[n + m + j] = -costs[j]

    while True:
        enter = next((j for j in range(total_cols) if red[j] < 0), -1)
        if enter < 0:
            break
        leave_row = -1
        best: Fraction | None = None
        for i in range(m + n):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave_row])
                ):
                    best = ratio
                    leave_row = i
        if leave_row < 0:
            raise LPError("unbounded covering LP; this cannot happen in [0,1] box")
        _pivot(rows, rhs, red, basis, leave_row, enter)

    values = {v: ZERO for v in support}
    for i, b in enumerate(basis):
        if b < n:
            values[support[b]] = rhs[i]
    return values


def _pivot(rows, rhs, red, basis, r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [a / piv for a in rows[r]]
    rhs[r] /= piv
    for i in range(len(rows)):
        if i == r:
            continue
        f = rows[i][c]
        if f:
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            rhs[i] -= f * rhs[r]
    f = red[c]
    if f:
        for j in range(len(red)):
            red[j] -= f * rows[r][j]
    basis[r] = c


def threshold_filter(
    sol: FractionalSolution,
    groups: Iterable[PathGroup],
    theta: Fraction,
) -> list[Path]:
    """Every path occurring in any group whose vertex sum under ``sol``
    reaches ``theta``, deduplicated by canonical vertex sequence."""
    kept: set[Path] = set()
    for group in groups:
        for p in group.paths:
            if sum((sol.value.get(v, ZERO) for v in p.vertices), ZERO) >= theta:
                kept.add(p.canonical())
    return sorted(kept)


def scale_and_cap(sol: FractionalSolution, c: Fraction) -> dict[int, Fraction]:
    """Entry-wise min(c * x_v, 1).  Not re-validated against any LP."""
    if c < 1:
        raise LPError(f"scaling factor must be >= 1, got {c}")
    return {v: min(c * x, ONE) for v, x in sol.value.items()}
