"""Amalgamation machinery: eps-pushouts with the explicit coproduct
norm, mediator maps, and finite-chain factorization experiments.

For eps > 0 the apex ball is the convex hull of the two injected balls
together with the scaled relation points (f(a), -g(a))/eps; its gauge is
exactly the infimal-convolution norm
    ||(x, y)|| = inf{ ||b|| + ||c|| + eps ||a|| : x = b + f(a), y = c - g(a) }.
For eps = 0 the apex is the quotient of the coproduct by the relation
subspace N = span{(f(a), -g(a))}, in coordinates given by a rational
complement of N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import (
    DimensionMismatch,
    NormTooLarge,
    NotEpsCommutative,
    StageOutOfRange,
)
from .lp import EQ, LE, lp_solve, make_lp
from .maps import LinearMap, compose, difference, operator_norm
from .rationals import (
    ONE,
    Q,
    ZERO,
    dot,
    hstack,
    mat_mul,
    mat_vec,
    rank,
    rref,
    vec,
    zeros,
)
from .spaces import PolyhedralSpace, make_space, ZERO_SPACE


@dataclass(frozen=True)
class EpsPushout:
    eps: object
    apex: PolyhedralSpace
    leg_from_b: LinearMap  # B -> D
    leg_from_c: LinearMap  # C -> D
    f: LinearMap  # A -> B
    g: LinearMap  # A -> C
    relation_basis: Optional[tuple]  # basis of N in B (+) C, eps = 0 only


def eps_pushout(f: LinearMap, g: LinearMap, eps) -> EpsPushout:
    if f.domain != g.domain:
        raise DimensionMismatch("pushout legs must share their domain")
    eps = Q(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    for name, h in (("f", f), ("g", g)):
        n = operator_norm(h)
        if n > 1:
            raise NormTooLarge(f"operator norm of {name} is {n} > 1")
    nb, nc = f.codomain.dim, g.codomain.dim
    zb, zc = zeros(nb), zeros(nc)
    sum_vertices = [tuple(v) + zc for v in f.codomain.ball_vertices]
    sum_vertices += [zb + tuple(w) for w in g.codomain.ball_vertices]
    if not sum_vertices:
        sum_vertices = [()]

    incl_b = tuple(_unit_row(nb, i) if i < nb else (ZERO,) * nb for i in range(nb + nc))
    incl_c = tuple((ZERO,) * nc if i < nb else _unit_row(nc, i - nb) for i in range(nb + nc))

    if eps > 0:
        pts = set(sum_vertices)
        inv = ONE / eps
        for a in f.domain.ball_vertices:
            fa, ga = f(a), g(a)
            pts.add(tuple(inv * x for x in fa) + tuple(-inv * y for y in ga))
        apex = make_space(vertices=sorted(pts)) if nb + nc > 0 else ZERO_SPACE
        leg_b = LinearMap(f.codomain, apex, incl_b)
        leg_c = LinearMap(g.codomain, apex, incl_c)
        push = EpsPushout(eps, apex, leg_b, leg_c, f, g, None)
    else:
        generators = []
        for a_idx in range(f.domain.dim):
            basis_vec = tuple(ONE if i == a_idx else ZERO for i in range(f.domain.dim))
            generators.append(tuple(f(basis_vec)) + tuple(-x for x in g(basis_vec)))
        nrows, pivots = rref(generators) if generators else ([], [])
        free = [j for j in range(nb + nc) if j not in pivots]
        proj = _projection_matrix(nrows, pivots, free, nb + nc)
        images = sorted({tuple(mat_vec(proj, v)) for v in sum_vertices})
        apex = make_space(vertices=images) if free else ZERO_SPACE
        leg_b = LinearMap(f.codomain, apex, mat_mul(proj, incl_b))
        leg_c = LinearMap(g.codomain, apex, mat_mul(proj, incl_c))
        push = EpsPushout(ZERO, apex, leg_b, leg_c, f, g, tuple(nrows))

    defect = operator_norm(difference(compose(push.leg_from_b, f), compose(push.leg_from_c, g)))
    assert defect <= eps, "constructed square is not eps-commutative"
    return push


def _unit_row(n, j):
    return tuple(ONE if i == j else ZERO for i in range(n))


def _projection_matrix(rel_rows, pivots, free, n):
    """Matrix of the projection R^n -> R^free with kernel span(rel_rows).

    rel_rows is in rref with pivot columns `pivots`; x maps to the free
    coordinates of x - sum_i x[p_i] * row_i.
    """
    rows = []
    for j in free:
        row = [ZERO] * n
        row[j] = ONE
        for rel, p in zip(rel_rows, pivots):
            # subtracting x[p] * rel changes coordinate j by -x[p]*rel[j]
            row[p] -= rel[j]
        rows.append(tuple(row))
    return tuple(rows)


def section_matrix(push: EpsPushout):
    """Right inverse of the quotient coordinates (eps = 0): places apex
    coordinates at the free positions and zero at the pivots."""
    assert push.eps == 0
    n = push.f.codomain.dim + push.g.codomain.dim
    _, pivots = rref(list(push.relation_basis))
    free = [j for j in range(n) if j not in pivots]
    rows = []
    for i in range(n):
        row = [ZERO] * len(free)
        if i in free:
            row[free.index(i)] = ONE
        rows.append(tuple(row))
    return tuple(rows)


def pushout_mediator(push: EpsPushout, f_prime: LinearMap, g_prime: LinearMap) -> LinearMap:
    """The unique t with t . leg_from_b = g_prime and t . leg_from_c = f_prime.

    (f_prime: C -> D', g_prime: B -> D') must form an eps-commutative
    square over the same (f, g) with operator norms <= 1.
    """
    if g_prime.domain != push.f.codomain or f_prime.domain != push.g.codomain:
        raise DimensionMismatch("cocone legs do not match the pushout square")
    if f_prime.codomain != g_prime.codomain:
        raise DimensionMismatch("cocone legs must share their codomain")
    for name, h in (("f'", f_prime), ("g'", g_prime)):
        n = operator_norm(h)
        if n > 1:
            raise NormTooLarge(f"operator norm of {name} is {n} > 1")
    gap = operator_norm(difference(compose(g_prime, push.f), compose(f_prime, push.g)))
    if gap > push.eps:
        raise NotEpsCommutative(f"square commutes only up to {gap} > eps = {push.eps}")
    joint = hstack(g_prime.matrix, f_prime.matrix)  # acts on B (+) C coordinates
    if push.eps > 0:
        t = LinearMap(push.apex, f_prime.codomain, joint)
    else:
        for rel in push.relation_basis:
            if any(x != 0 for x in mat_vec(joint, rel)):
                raise NotEpsCommutative("cocone does not vanish on the relation subspace")
        t = LinearMap(push.apex, f_prime.codomain, mat_mul(joint, section_matrix(push)))
    # exactness and universal-property guarantees, re-checked
    assert compose(t, push.leg_from_b).matrix == g_prime.matrix
    assert compose(t, push.leg_from_c).matrix == f_prime.matrix
    assert operator_norm(t) <= 1
    assert _legs_jointly_span(push), "mediator would not be unique"
    return t


def _legs_jointly_span(push: EpsPushout) -> bool:
    cols = hstack(push.leg_from_b.matrix, push.leg_from_c.matrix)
    return rank(cols) == push.apex.dim


def decomposition_norm(push: EpsPushout, x, y):
    """Direct evaluation of the infimal-convolution formula
    at (x, y) by one LP over decompositions x = b + f(a), y = c - g(a).

    Serves as the independent oracle for the apex gauge.
    """
    f, g, eps = push.f, push.g, push.eps
    na, nb, nc = f.domain.dim, f.codomain.dim, g.codomain.dim
    x, y = vec(x), vec(y)
    # variables: b (nb), c (nc), a (na), sb, sc, sa
    nv = nb + nc + na + 3
    ib, ic, ia = 0, nb, nb + nc
    isb, isc, isa = nb + nc + na, nb + nc + na + 1, nb + nc + na + 2
    cons = []
    for r in range(nb):
        row = [ZERO] * nv
        row[ib + r] = ONE
        for j in range(na):
            row[ia + j] = f.matrix[r][j]
        cons.append((row, EQ, x[r]))
    for r in range(nc):
        row = [ZERO] * nv
        row[ic + r] = ONE
        for j in range(na):
            row[ia + j] = -g.matrix[r][j]
        cons.append((row, EQ, y[r]))
    for phi in f.codomain.ball_facets:
        row = [ZERO] * nv
        for r in range(nb):
            row[ib + r] = phi[r]
        row[isb] = -ONE
        cons.append((row, LE, ZERO))
    for phi in g.codomain.ball_facets:
        row = [ZERO] * nv
        for r in range(nc):
            row[ic + r] = phi[r]
        row[isc] = -ONE
        cons.append((row, LE, ZERO))
    for phi in f.domain.ball_facets:
        row = [ZERO] * nv
        for j in range(na):
            row[ia + j] = phi[j]
        row[isa] = -ONE
        cons.append((row, LE, ZERO))
    for s in (isb, isc, isa):
        row = [ZERO] * nv
        row[s] = -ONE
        cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[isb] = ONE
    obj[isc] = ONE
    obj[isa] = eps
    res = lp_solve(make_lp(nv, obj, "min", cons))
    if not res.is_optimal:
        # eps = 0 and (x, y) not reachable: the formula only defines the
        # quotient norm on classes, where it is always feasible
        return None
    return res.optimum


@dataclass(frozen=True)
class Chain:
    """A finite chain K_0 -> K_1 -> ... -> K_N of norm <= 1 links."""

    spaces: tuple
    links: tuple  # links[i]: K_i -> K_{i+1}

    def __post_init__(self):
        assert len(self.links) == len(self.spaces) - 1
        for i, link in enumerate(self.links):
            if link.domain != self.spaces[i] or link.codomain != self.spaces[i + 1]:
                raise DimensionMismatch(f"link {i} does not connect stages {i},{i + 1}")
            if operator_norm(link) > 1:
                raise NormTooLarge(f"link {i} has operator norm > 1")

    @property
    def last(self) -> PolyhedralSpace:
        return self.spaces[-1]

    def composite(self, i: int, j: int) -> LinearMap:
        """k_{ij}: K_i -> K_j (identity when i == j)."""
        if not (0 <= i <= j < len(self.spaces)):
            raise StageOutOfRange(f"stages {i}..{j} outside 0..{len(self.spaces) - 1}")
        from .maps import identity_map

        out = identity_map(self.spaces[i])
        for k in range(i, j):
            out = compose(self.links[k], out)
        return out


def chain_colimit_distance(chain: Chain, f: LinearMap, g: LinearMap, stage: int):
    """The nonincreasing sequence ||k_{ij}(f - g)|| for j = stage..N."""
    if not (0 <= stage < len(chain.spaces)):
        raise StageOutOfRange(f"stage {stage} outside the chain")
    if f.codomain != chain.spaces[stage] or g.codomain != chain.spaces[stage]:
        raise DimensionMismatch("maps must land in the given stage")
    if f.domain != g.domain:
        raise DimensionMismatch("maps must share their domain")
    out = []
    for j in range(stage, len(chain.spaces)):
        k = chain.composite(stage, j)
        out.append(operator_norm(difference(compose(k, f), compose(k, g))))
    return out


def factor_through_stage(chain: Chain, f: LinearMap, eps) -> Tuple[int, LinearMap]:
    """Least stage i with some g: A -> K_i, ||g|| <= 1, ||k_{iN} g - f|| <= eps."""
    eps = Q(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if f.codomain != chain.last:
        raise DimensionMismatch("f must land in the last stage")
    if operator_norm(f) > 1:
        raise NormTooLarge("f must have operator norm <= 1")
    for i in range(len(chain.spaces)):
        dist, g = best_factorization(chain, f, i)
        if dist is not None and dist <= eps:
            return i, g
    raise AssertionError("stage N must always succeed")  # pragma: no cover


def best_factorization(chain: Chain, f: LinearMap, stage: int):
    """Min over ||g|| <= 1 of ||k_{stage,N} g - f||, with a witness g."""
    a = f.domain
    ki = chain.spaces[stage]
    last = chain.last
    comp = chain.composite(stage, len(chain.spaces) - 1).matrix
    na, nk = a.dim, ki.dim
    nv = na * nk + 1
    s_idx = na * nk
    cons = []
    for v in a.ball_vertices:
        # g v in Ball_{K_i}
        for phi in ki.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for c in range(na):
                    row[r * na + c] += phi[r] * v[c]
            cons.append((row, LE, ONE))
        # (comp g - f) v in s Ball_{K_N}
        fv = f(v)
        for psi in last.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                coef = dot(psi, tuple(comp[q][r] for q in range(len(comp))))
                for c in range(na):
                    row[r * na + c] += coef * v[c]
            row[s_idx] = -ONE
            cons.append((row, LE, dot(psi, fv)))
    row = [ZERO] * nv
    row[s_idx] = -ONE
    cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[s_idx] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    if not res.is_optimal:
        return None, None
    w = res.witness
    gmat = tuple(tuple(w[r * na + c] for c in range(na)) for r in range(nk))
    return res.optimum, LinearMap(a, ki, gmat)
