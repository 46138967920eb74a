"""Purity / ideal tests for isometric embeddings, decided by exact LPs.

In finite dimension the "for every eps > 0 there is an extension operator
of norm <= 1 + eps" quantifier collapses: the set of extensions is a
polytope, the minimal extension norm is attained, and the embedding is an
ideal iff that minimum is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    NotAnIsometry,
    PreconditionViolated,
    SquareNotCommuting,
)
from .lp import EQ, LE, lp_solve, make_lp
from .maps import (
    LinearMap,
    compose,
    difference,
    isometry_defect,
    min_norm_on_sphere,
    operator_norm,
)
from .rationals import ONE, Q, ZERO, dot, nullspace, vec


@dataclass(frozen=True)
class Embedding:
    """An isometric embedding K -> L together with a basis of its image."""

    map: LinearMap
    intersection_basis: tuple  # columns of the matrix: basis of f[K] in L

    @property
    def subspace(self):
        return self.map.domain

    @property
    def ambient(self):
        return self.map.codomain


def embedding(f: LinearMap) -> Embedding:
    d = isometry_defect(f)
    if not d.is_isometry:
        raise NotAnIsometry(f"defect ({d.upper}, {d.lower}) != (0, 0)")
    cols = tuple(tuple(row[j] for row in f.matrix) for j in range(f.domain.dim))
    return Embedding(f, cols)


@dataclass(frozen=True)
class DefectReport:
    value: object
    witness: Optional[LinearMap]
    kind: str  # ideal | retraction | square | saturation | injectivity

    @property
    def is_zero(self) -> bool:
        return self.value == 0


def _map_vars(nrows, ncols):
    """Index helper for a matrix of LP variables laid out row-major."""

    def at(r, c):
        return r * ncols + c

    return nrows * ncols, at


def minimal_extension_norm(e: Embedding):
    """min{ ||t|| : t: L -> K linear, t . f = id_K }, with a witness."""
    k, l, fm = e.subspace, e.ambient, e.map.matrix
    nk, nl = k.dim, l.dim
    nmat, at = _map_vars(nk, nl)
    nv = nmat + 1
    s = nmat
    cons = []
    # t . f = id_K
    for r in range(nk):
        for c in range(nk):
            row = [ZERO] * nv
            for j in range(nl):
                row[at(r, j)] = fm[j][c]
            cons.append((row, EQ, ONE if r == c else ZERO))
    # phi(t v) <= s for every ambient ball vertex and subspace facet
    for v in l.ball_vertices:
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for j in range(nl):
                    row[at(r, j)] += phi[r] * v[j]
            row[s] = -ONE
            cons.append((row, LE, ZERO))
    row = [ZERO] * nv
    row[s] = -ONE
    cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[s] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    assert res.is_optimal, "extension LP is always feasible and bounded"
    w = res.witness
    tmat = tuple(tuple(w[at(r, j)] for j in range(nl)) for r in range(nk))
    return res.optimum, LinearMap(l, k, tmat)


def ideal_defect(e: Embedding) -> DefectReport:
    """0 iff the embedding is an ideal (equivalently: pure)."""
    if e.subspace.dim == e.ambient.dim:
        # codimension zero: the inverse isometry is a norm-one extension
        return DefectReport(ZERO, _inverse_of_isometry(e.map), "ideal")
    if e.subspace.dim == 0:
        zero = LinearMap(e.ambient, e.subspace, ())
        return DefectReport(ZERO, zero, "ideal")
    best, witness = minimal_extension_norm(e)
    value = best - ONE
    if value < 0:
        value = ZERO
    return DefectReport(value, witness, "ideal")


def _inverse_of_isometry(f: LinearMap) -> LinearMap:
    from .rationals import solve

    n = f.domain.dim
    cols = []
    for j in range(n):
        ej = tuple(ONE if i == j else ZERO for i in range(n))
        x = solve(f.matrix, ej)
        assert x is not None
        cols.append(x)
    inv = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return LinearMap(f.codomain, f.domain, inv)


def retraction_defect(f: LinearMap) -> DefectReport:
    """min{ ||s . f - id_K|| : ||s|| <= 1 }; 0 iff f splits."""
    k, l, fm = f.domain, f.codomain, f.matrix
    if operator_norm(f) > 1:
        raise NotAnIsometry("retraction defect expects a norm <= 1 map")
    nk, nl = k.dim, l.dim
    nmat, at = _map_vars(nk, nl)
    nv = nmat + 1
    s_idx = nmat
    cons = []
    for v in l.ball_vertices:
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for j in range(nl):
                    row[at(r, j)] += phi[r] * v[j]
            cons.append((row, LE, ONE))
    # phi((s f - id) w) <= u on subspace ball vertices
    for w in k.ball_vertices:
        fw = f(w)
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for j in range(nl):
                    row[at(r, j)] += phi[r] * fw[j]
            row[s_idx] = -ONE
            cons.append((row, LE, dot(phi, w)))
    row = [ZERO] * nv
    row[s_idx] = -ONE
    cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[s_idx] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    assert res.is_optimal
    wvec = res.witness
    smat = tuple(tuple(wvec[at(r, j)] for j in range(nl)) for r in range(nk))
    return DefectReport(res.optimum, LinearMap(l, k, smat), "retraction")


def pure_square_defect(e: Embedding, g: LinearMap, u: LinearMap, v: LinearMap) -> DefectReport:
    """min{ ||t g - u|| : t: B -> K, ||t|| <= 1 } for a commuting square
    f u = v g with f = e.map."""
    f = e.map
    if u.domain != g.domain:
        raise DimensionMismatch("u and g must share their domain")
    if u.codomain != f.domain or v.codomain != f.codomain or v.domain != g.codomain:
        raise DimensionMismatch("square corners do not match the embedding")
    if compose(f, u).matrix != compose(v, g).matrix:
        raise SquareNotCommuting("f u != v g")
    a, b, k = g.domain, g.codomain, f.domain
    nk, nb = k.dim, b.dim
    nmat, at = _map_vars(nk, nb)
    nv = nmat + 1
    s_idx = nmat
    cons = []
    for w in b.ball_vertices:
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for j in range(nb):
                    row[at(r, j)] += phi[r] * w[j]
            cons.append((row, LE, ONE))
    for av in a.ball_vertices:
        gav = g(av)
        uav = u(av)
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for j in range(nb):
                    row[at(r, j)] += phi[r] * gav[j]
            row[s_idx] = -ONE
            cons.append((row, LE, dot(phi, uav)))
    row = [ZERO] * nv
    row[s_idx] = -ONE
    cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[s_idx] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    assert res.is_optimal
    wvec = res.witness
    tmat = tuple(tuple(wvec[at(r, j)] for j in range(nb)) for r in range(nk))
    return DefectReport(res.optimum, LinearMap(b, k, tmat), "square")


def intersection_pairs(e_k: Embedding, e_b: Embedding):
    """Pairs (x in K, y in B) with e_k(x) = e_b(y), spanning f_K[K] n f_B[B]."""
    mk, mb = e_k.map.matrix, e_b.map.matrix
    nk, nb = e_k.subspace.dim, e_b.subspace.dim
    ambient = e_k.ambient.dim
    rows = tuple(
        tuple(mk[i][c] for c in range(nk)) + tuple(-mb[i][c] for c in range(nb))
        for i in range(ambient)
    )
    pairs = []
    for gen in nullspace(rows):
        pairs.append((vec(gen[:nk]), vec(gen[nk:])))
    return pairs


def verify_u_extension_candidate(e_k: Embedding, e_b: Embedding, t: LinearMap, eps) -> bool:
    """True iff t: B -> K fixes K n B exactly and is a strong eps-isometry.

    e_k and e_b embed K and B into the same ambient space; "fixes" means
    e_k(t(y)) = e_b(y) for every y with e_b(y) in the intersection.
    """
    eps = Q(eps)
    if e_k.ambient != e_b.ambient:
        raise DimensionMismatch("embeddings must share their ambient space")
    if t.domain != e_b.subspace or t.codomain != e_k.subspace:
        raise DimensionMismatch("candidate must map B to K")
    for x, y in intersection_pairs(e_k, e_b):
        if tuple(t(y)) != tuple(x):
            return False
    # strong eps-isometry: (1+eps)^{-1} ||x|| <= ||t x|| <= (1+eps) ||x||
    if operator_norm(t) > 1 + eps:
        return False
    if t.domain.dim > 0 and min_norm_on_sphere(t) < ONE / (ONE + eps):
        return False
    return True


def coordinate_bound(space) -> object:
    """M = max |a_i| over coordinate expansions of unit-ball elements."""
    best = ZERO
    for v in space.ball_vertices:
        for a in v:
            if abs(a) > best:
                best = abs(a)
    return best


def repair_fix_basis(t_prime: LinearMap, targets: Sequence, eps) -> LinearMap:
    """Replace t'(e_i) by target_i for i < m; certified ||t - t'|| <= eps.

    Requires ||t'(e_i) - target_i|| <= delta = eps / (n M) for each fixed
    index, where n = dim B and M bounds unit-ball coordinates.
    """
    eps = Q(eps)
    b, k = t_prime.domain, t_prime.codomain
    m = len(targets)
    if m > b.dim:
        raise DimensionMismatch("more targets than basis vectors")
    if m == 0 or b.dim == 0:
        return t_prime
    n = b.dim
    cap = coordinate_bound(b)
    if cap == 0:
        raise PreconditionViolated("degenerate ball: no coordinate bound")
    delta = eps / (n * cap)
    cols = [tuple(row[j] for row in t_prime.matrix) for j in range(n)]
    for i in range(m):
        target = vec(targets[i])
        gap = k.norm(tuple(a - b_ for a, b_ in zip(cols[i], target)))
        if gap > delta:
            raise PreconditionViolated(f"||t'(e_{i + 1}) - target|| = {gap} > delta = {delta}")
        cols[i] = target
    tmat = tuple(tuple(cols[j][r] for j in range(n)) for r in range(k.dim))
    t = LinearMap(b, k, tmat)
    # the delta bound certifies ||t - t'|| <= eps; re-verify exactly
    assert operator_norm(difference(t, t_prime)) <= eps
    return t
