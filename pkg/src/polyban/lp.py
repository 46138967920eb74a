"""Exact rational linear programming.

Two-phase primal simplex on a dense tableau, Bland's anti-cycling rule,
all arithmetic over Q. Free variables are split into differences of
nonnegative ones, so callers state programs in the natural form
(rational objective, constraints with <= / = / >=, unrestricted
variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .rationals import ONE, Q, ZERO, dot, rat, vec

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    objective: tuple
    direction: str  # "min" | "max"
    constraints: tuple  # of (coeffs, relation, bound)

    def __post_init__(self):
        if self.direction not in ("min", "max"):
            raise ValueError(f"bad direction {self.direction!r}")
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length != num_vars")
        for coeffs, rel, _bound in self.constraints:
            if rel not in _RELATIONS:
                raise ValueError(f"bad relation {rel!r}")
            if len(coeffs) != self.num_vars:
                raise ValueError("constraint length != num_vars")


def make_lp(num_vars, objective, direction, constraints) -> LinearProgram:
    return LinearProgram(
        num_vars,
        vec(objective),
        direction,
        tuple((vec(c), rel, rat(b)) for c, rel, b in constraints),
    )


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Optional[object] = None
    witness: Optional[tuple] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def lp_solve(lp: LinearProgram) -> LPResult:
    """Exact optimum of lp; the witness satisfies every constraint exactly."""
    n = lp.num_vars
    sign = ONE if lp.direction == "min" else -ONE
    # split each free variable x_j = p_j - q_j, p,q >= 0
    cost: List = []
    for cj in lp.objective:
        cost.extend((sign * cj, -sign * cj))
    rows: List[List] = []
    rhs: List = []
    nslack = sum(1 for _, rel, _ in lp.constraints if rel != EQ)
    total = 2 * n + nslack
    si = 2 * n
    for coeffs, rel, bound in lp.constraints:
        row = [ZERO] * total
        for j, a in enumerate(coeffs):
            row[2 * j] = a
            row[2 * j + 1] = -a
        b = rat(bound)
        if rel == LE:
            row[si] = ONE
            si += 1
        elif rel == GE:
            row[si] = -ONE
            si += 1
        if b < 0:
            row = [-a for a in row]
            b = -b
        rows.append(row)
        rhs.append(b)
    cost.extend([ZERO] * nslack)

    x = _two_phase(rows, rhs, cost, total)
    if x is None:
        return LPResult("infeasible")
    if x == "unbounded":
        return LPResult("unbounded")
    witness = tuple(x[2 * j] - x[2 * j + 1] for j in range(n))
    value = dot(lp.objective, witness)
    _check_feasible(lp, witness)
    return LPResult("optimal", value, witness)


def _check_feasible(lp: LinearProgram, x) -> None:
    for coeffs, rel, bound in lp.constraints:
        v = dot(coeffs, x)
        ok = v <= bound if rel == LE else v >= bound if rel == GE else v == bound
        if not ok:  # pragma: no cover - would indicate a solver bug
            raise AssertionError("simplex produced an infeasible witness")


def _two_phase(rows, rhs, cost, total):
    m = len(rows)
    if m == 0:
        # no constraints: optimum 0 only when the cost is identically zero
        if any(c < 0 for c in cost):
            return "unbounded"
        return [ZERO] * total
    # phase 1: artificial variable per row
    tab = [rows[i][:] + [ONE if j == i else ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [total + i for i in range(m)]
    width = total + m
    obj = [ZERO] * (width + 1)
    for j in range(total, width):
        obj[j] = ONE
    _price_out(obj, tab, basis)
    if _simplex(tab, basis, obj, width) == "unbounded":  # pragma: no cover
        raise AssertionError("phase 1 cannot be unbounded")
    if -obj[width] != 0:
        return None  # infeasible
    _drive_out_artificials(tab, basis, total, width)
    # phase 2 on the original columns
    tab2 = [row[:total] + [row[width]] for row in tab if True]
    keep = [i for i in range(m) if basis[i] < total or _nonzero_row(tab2[i], total)]
    tab2 = [tab2[i] for i in keep]
    basis2 = [basis[i] for i in keep]
    obj2 = list(cost) + [ZERO]
    _price_out(obj2, tab2, basis2)
    if _simplex(tab2, basis2, obj2, total) == "unbounded":
        return "unbounded"
    x = [ZERO] * total
    for i, bv in enumerate(basis2):
        if bv < total:
            x[bv] = tab2[i][total]
    return x


def _nonzero_row(row, total) -> bool:
    return any(row[j] != 0 for j in range(total)) or row[total] != 0


def _price_out(obj, tab, basis) -> None:
    for i, bv in enumerate(basis):
        f = obj[bv]
        if f != 0:
            row = tab[i]
            for j in range(len(obj)):
                obj[j] -= f * row[j]


def _drive_out_artificials(tab, basis, total, width) -> None:
    for i in range(len(basis)):
        if basis[i] >= total:
            row = tab[i]
            col = next((j for j in range(total) if row[j] != 0), None)
            if col is not None:
                _pivot(tab, basis, None, i, col)
            # else: redundant zero row, dropped when phase 2 is assembled


def _simplex(tab, basis, obj, nvars):
    """Bland's rule: lowest-index entering and leaving variables."""
    while True:
        enter = next((j for j in range(nvars) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(tab, basis, obj, leave, enter)


def _pivot(tab, basis, obj, leave, enter) -> None:
    row = tab[leave]
    inv = ONE / row[enter]
    tab[leave] = row = [inv * a for a in row]
    for i, other in enumerate(tab):
        if i != leave and other[enter] != 0:
            f = other[enter]
            tab[i] = [a - f * b for a, b in zip(other, row)]
    if obj is not None and obj[enter] != 0:
        f = obj[enter]
        for j in range(len(obj)):
            obj[j] -= f * row[j]
    basis[leave] = enter
