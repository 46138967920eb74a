"""Exact polytope geometry: vertex enumeration and facet (convex hull)
computation by exhaustive subset intersection.

Deliberately small-scale: ambient dimension is capped at GEOMETRY_CAP and
correctness is preferred over asymptotics. All coordinates are rational.
"""

from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

from .errors import DegenerateSystem, DimensionCapExceeded, UnboundedPolytope
from .lp import LE, lp_solve, make_lp
from .rationals import ONE, Q, ZERO, dot, mat, rank, solve, vec

GEOMETRY_CAP = 6

Facet = Tuple[tuple, object]  # (normal, offset): normal . x <= offset


def geometry_cap() -> int:
    return GEOMETRY_CAP


def set_geometry_cap(cap: int) -> None:
    """Process-wide override of the exhaustive-enumeration dimension cap."""
    global GEOMETRY_CAP
    if cap < 1:
        raise ValueError("cap must be positive")
    GEOMETRY_CAP = cap


def check_dim_cap(dim: int, what: str = "ambient dimension") -> None:
    if dim > GEOMETRY_CAP:
        raise DimensionCapExceeded(f"{what} {dim} exceeds cap {GEOMETRY_CAP}")


def _canonical_facet(normal, offset) -> Facet:
    """Scale a rational facet to a canonical integer representative."""
    dens = [q.denominator for q in normal] + [offset.denominator]
    lcm = 1
    for d in dens:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(q * lcm) for q in normal] + [int(offset * lcm)]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if g > 1:
        ints = [a // g for a in ints]
    return (tuple(Q(a) for a in ints[:-1]), Q(ints[-1]))


def vertex_enumerate(facets: Sequence[Facet]) -> List[tuple]:
    """Exact vertex set of {x : n.x <= b for (n, b) in facets}.

    The system must describe a bounded full-dimensional polytope.
    """
    facets = [(vec(n), Q(b)) for n, b in facets]
    if not facets:
        raise DegenerateSystem("empty facet system")
    dim = len(facets[0][0])
    if dim == 0:
        return [()]
    check_dim_cap(dim)
    _require_bounded(facets, dim)
    _require_full_dimensional(facets, dim)
    normals = [f[0] for f in facets]
    offsets = [f[1] for f in facets]
    verts = set()
    for idx in _independent_subsets(normals, dim):
        a = mat([normals[i] for i in idx])
        b = vec([offsets[i] for i in idx])
        x = solve(a, b)
        if x is None:
            continue
        if all(dot(n, x) <= off for n, off in facets):
            verts.add(x)
    return sorted(verts)


def _independent_subsets(rows, k):
    """All k-subsets of row indices whose rows are linearly independent,
    generated with incremental rank pruning."""
    n = len(rows)
    out = []

    def extend(start, chosen, echelon):
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        for i in range(start, n - (k - len(chosen)) + 1):
            reduced = _reduce_against(rows[i], echelon)
            if reduced is None:
                continue
            chosen.append(i)
            extend(i + 1, chosen, echelon + [reduced])
            chosen.pop()

    extend(0, [], [])
    return out


def _reduce_against(row, echelon):
    """Reduce row against echelon rows; None if it becomes zero."""
    r = list(row)
    for erow, piv in echelon:
        if r[piv] != 0:
            f = r[piv] / erow[piv]
            r = [a - f * b for a, b in zip(r, erow)]
    piv = next((j for j, a in enumerate(r) if a != 0), None)
    if piv is None:
        return None
    return (r, piv)


def _require_bounded(facets, dim) -> None:
    # a recession direction exists iff some coordinate is unbounded
    constraints = [(n, LE, b) for n, b in facets]
    for j in range(dim):
        e = [ONE if i == j else ZERO for i in range(dim)]
        for direction in ("max", "min"):
            res = lp_solve(make_lp(dim, e, direction, constraints))
            if res.status == "unbounded":
                raise UnboundedPolytope(f"coordinate {j} unbounded")
            if res.status == "infeasible":
                raise DegenerateSystem("facet system is infeasible")


def _require_full_dimensional(facets, dim) -> None:
    # maximize interior clearance t with n.x + t <= b, t <= 1
    nvars = dim + 1
    constraints = [(list(n) + [ONE], LE, b) for n, b in facets]
    constraints.append(([ZERO] * dim + [ONE], LE, ONE))
    obj = [ZERO] * dim + [ONE]
    res = lp_solve(make_lp(nvars, obj, "max", constraints))
    if not res.is_optimal or res.optimum <= 0:
        raise DegenerateSystem("polytope is not full-dimensional")


def convex_hull_facets(points: Sequence[Sequence]) -> List[Facet]:
    """Irredundant facet description of conv(points).

    The points must span the ambient dimension affinely.
    """
    pts = sorted({vec(p) for p in points})
    if not pts:
        raise DegenerateSystem("no points")
    dim = len(pts[0])
    if dim == 0:
        return []
    check_dim_cap(dim)
    base = pts[0]
    if rank([tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]) < dim:
        raise DegenerateSystem("hull is not full-dimensional")
    facets = set()
    rows = [p + (-ONE,) for p in pts]  # hyperplane n.p = b as (n, b) nullvector
    for idx in _affinely_independent_subsets(pts, dim):
        sub = mat([rows[i] for i in idx])
        normal_b = _hyperplane_through(sub)
        if normal_b is None:
            continue
        normal, off = normal_b
        side = 0
        supporting = True
        for p in pts:
            s = dot(normal, p) - off
            if s == 0:
                continue
            sgn = 1 if s > 0 else -1
            if side == 0:
                side = sgn
            elif side != sgn:
                supporting = False
                break
        if not supporting:
            continue
        if side > 0:
            normal = tuple(-a for a in normal)
            off = -off
        facets.add(_canonical_facet(vec(normal), Q(off)))
    if not facets:  # pragma: no cover - excluded by the rank check above
        raise DegenerateSystem("no supporting hyperplanes found")
    return sorted(facets)


def _affinely_independent_subsets(pts, dim):
    """dim-subsets of point indices that are affinely independent."""
    n = len(pts)
    out = []

    def extend(start, chosen, echelon):
        if len(chosen) == dim:
            out.append(tuple(chosen))
            return
        for i in range(start, n - (dim - len(chosen)) + 1):
            if not chosen:
                chosen.append(i)
                extend(i + 1, chosen, [])
                chosen.pop()
                continue
            diff = tuple(a - b for a, b in zip(pts[i], pts[chosen[0]]))
            reduced = _reduce_against(diff, echelon)
            if reduced is None:
                continue
            chosen.append(i)
            extend(i + 1, chosen, echelon + [reduced])
            chosen.pop()

    extend(0, [], [])
    return out


def _hyperplane_through(rows):
    """Unique hyperplane n.x = b through the points encoded in rows
    (each row is p + (-1,)); None if not unique."""
    ns = _nullspace_of(rows)
    if len(ns) != 1:
        return None
    gen = ns[0]
    normal, off = gen[:-1], gen[-1]
    if all(a == 0 for a in normal):
        return None
    return vec(normal), Q(off)


def _nullspace_of(rows):
    from .rationals import nullspace

    return nullspace(mat(rows))


def extreme_points(points: Sequence[Sequence], facets: Sequence[Facet]) -> List[tuple]:
    """Filter points to those lying on dim linearly independent tight facets."""
    pts = sorted({vec(p) for p in points})
    if not pts:
        return []
    dim = len(pts[0])
    out = []
    for p in pts:
        tight = [n for n, b in facets if dot(n, p) == b]
        if len(tight) >= dim and rank(tight) == dim:
            out.append(p)
    return out
