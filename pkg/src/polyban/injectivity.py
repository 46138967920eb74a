"""Approximate injectivity and saturation defects, Lindenstrauss-style
catalog reports, and the iterated-pushout amalgamation builder.

The injectivity defect quantifies over all norm <= 1 maps f: A -> K; that
operator ball is a polytope cut out by vertex-image constraints, the
inner factorization error is convex in f, so the max is attained at an
operator-ball vertex and the whole quantity is exactly computable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .colimits import eps_pushout
from .errors import DimensionCapExceeded, NotAnIsometry
from .geometry import geometry_cap, vertex_enumerate
from .lp import LE, lp_solve, make_lp
from .maps import (
    LinearMap,
    compose,
    difference,
    isometry_defect,
    operator_norm,
)
from .purity import DefectReport
from .rationals import ONE, ZERO, dot, mat, rank, solve, vec
from .spaces import PolyhedralSpace, direct_sum


def operator_ball_vertices(a: PolyhedralSpace, k: PolyhedralSpace) -> List[LinearMap]:
    """Vertices of the polytope of norm <= 1 linear maps A -> K."""
    na, nk = a.dim, k.dim
    if na == 0 or nk == 0:
        return [LinearMap(a, k, tuple((ZERO,) * na for _ in range(nk)))]
    if na * nk > geometry_cap():
        raise DimensionCapExceeded(
            f"operator polytope dimension {na * nk} exceeds cap {geometry_cap()}"
        )
    facets = []
    for v in a.ball_vertices:
        for phi in k.ball_facets:
            row = [ZERO] * (na * nk)
            for r in range(nk):
                for c in range(na):
                    row[r * na + c] += phi[r] * v[c]
            facets.append((tuple(row), ONE))
    out = []
    for w in vertex_enumerate(facets):
        m = tuple(tuple(w[r * na + c] for c in range(na)) for r in range(nk))
        out.append(LinearMap(a, k, m))
    return out


def best_factorization_error(h: LinearMap, f: LinearMap):
    """min{ ||g h - f|| : g: B -> K, ||g|| <= 1 }, with witness g."""
    a, b, k = h.domain, h.codomain, f.codomain
    nb, nk = b.dim, k.dim
    nv = nb * nk + 1
    s_idx = nb * nk
    cons = []
    for w in b.ball_vertices:
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for c in range(nb):
                    row[r * nb + c] += phi[r] * w[c]
            cons.append((row, LE, ONE))
    for av in a.ball_vertices:
        hv, fv = h(av), f(av)
        for phi in k.ball_facets:
            row = [ZERO] * nv
            for r in range(nk):
                for c in range(nb):
                    row[r * nb + c] += phi[r] * hv[c]
            row[s_idx] = -ONE
            cons.append((row, LE, dot(phi, fv)))
    row = [ZERO] * nv
    row[s_idx] = -ONE
    cons.append((row, LE, ZERO))
    obj = [ZERO] * nv
    obj[s_idx] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    assert res.is_optimal
    wv = res.witness
    gmat = tuple(tuple(wv[r * nb + c] for c in range(nb)) for r in range(nk))
    return res.optimum, LinearMap(b, k, gmat)


def injectivity_defect(h: LinearMap, k: PolyhedralSpace) -> DefectReport:
    """Worst factorization error over the operator ball of maps A -> K;
    0 iff K is approximately injective to h."""
    if operator_norm(h) > 1:
        raise NotAnIsometry("h must have operator norm <= 1")
    worst = ZERO
    worst_f = None
    for f in operator_ball_vertices(h.domain, k):
        err, _g = best_factorization_error(h, f)
        if err > worst or worst_f is None:
            worst = err
            worst_f = f
    return DefectReport(worst, worst_f, "injectivity")


def product_injectivity(h: LinearMap, k: PolyhedralSpace, l: PolyhedralSpace) -> DefectReport:
    """Defect against the max-sum K (+)_max L; equals the max of the
    component defects because the product ball factorizes."""
    p = direct_sum(k, l, "max")
    report = injectivity_defect(h, p)
    return DefectReport(report.value, report.witness, "injectivity")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    map: LinearMap
    is_isometry: bool


@dataclass(frozen=True)
class MorphismCatalog:
    entries: tuple

    def __post_init__(self):
        for e in self.entries:
            if operator_norm(e.map) > 1:
                raise NotAnIsometry(f"catalog map {e.name} has norm > 1")
            if e.is_isometry != isometry_defect(e.map).is_isometry:
                raise NotAnIsometry(f"catalog flag for {e.name} contradicts its defect")

    def isometries(self):
        return [e for e in self.entries if e.is_isometry]


def catalog(maps: Sequence[Tuple[str, LinearMap]]) -> MorphismCatalog:
    return MorphismCatalog(
        tuple(CatalogEntry(n, m, isometry_defect(m).is_isometry) for n, m in maps)
    )


def lindenstrauss_report(k: PolyhedralSpace, cat: MorphismCatalog):
    """Injectivity defects of K against every isometry in the catalog.

    A clean report means "no counterexample in this catalog", never the
    full Lindenstrauss property.
    """
    return [(e.name, injectivity_defect(e.map, k)) for e in cat.isometries()]


@dataclass(frozen=True)
class SaturationRecord:
    target: LinearMap  # the isometry f: A -> K being matched
    best_bound: object
    certified: bool
    source: str  # "isometry-candidate" | "relaxation"
    witness: Optional[LinearMap] = None


def isometric_vertex_candidates(b: PolyhedralSpace, k: PolyhedralSpace) -> List[LinearMap]:
    """Isometries B -> K determined by sending a vertex basis of Ball_B to
    ball vertices of K, filtered to exact isometries."""
    if b.dim == 0:
        return [LinearMap(b, k, tuple(() for _ in range(k.dim)))]
    basis_idx = _independent_vertex_basis(b)
    if basis_idx is None:
        return []
    basis = mat([b.ball_vertices[i] for i in basis_idx])
    out = []
    for images in product(k.ball_vertices, repeat=b.dim):
        # solve G basis_i = image_i: G = images_matrix . basis^{-1}
        gmat_t = []
        ok = True
        for col in range(k.dim):
            rhs = vec([images[i][col] for i in range(b.dim)])
            sol = solve(basis, rhs)
            if sol is None:
                ok = False
                break
            gmat_t.append(sol)
        if not ok:
            continue
        g = LinearMap(b, k, mat(gmat_t))
        if all(k.contains_in_ball(g(w)) for w in b.ball_vertices) and isometry_defect(g).is_isometry:
            out.append(g)
    return out


def _independent_vertex_basis(space: PolyhedralSpace):
    chosen = []
    for i, v in enumerate(space.ball_vertices):
        if rank([space.ball_vertices[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
        if len(chosen) == space.dim:
            return chosen
    return None


def saturation_report(
    h: LinearMap,
    k: PolyhedralSpace,
    test_isometries: Sequence[LinearMap],
    extra_candidates: Sequence[LinearMap] = (),
) -> List[SaturationRecord]:
    """Best ||g h - f|| over candidate isometries g: B -> K for each test
    isometry f: A -> K.

    Exact isometry synthesis is nonconvex, so a nonzero bound is only an
    upper estimate (marked non-certified); with no candidate at all the
    norm <= 1 relaxation LP supplies the reported bound.
    """
    if not isometry_defect(h).is_isometry:
        raise NotAnIsometry("h must be an isometry")
    for f in test_isometries:
        if not isometry_defect(f).is_isometry:
            raise NotAnIsometry("test map is not an isometry")
    candidates = isometric_vertex_candidates(h.codomain, k)
    candidates += [g for g in extra_candidates if isometry_defect(g).is_isometry]
    out = []
    for f in test_isometries:
        best = None
        witness = None
        for g in candidates:
            err = operator_norm(difference(compose(g, h), f))
            if best is None or err < best:
                best, witness = err, g
            if best == 0:
                break
        if best is not None:
            out.append(SaturationRecord(f, best, best == 0, "isometry-candidate", witness))
        else:
            err, g = best_factorization_error(h, f)
            out.append(SaturationRecord(f, err, False, "relaxation", g))
    return out


@dataclass(frozen=True)
class GurariiRound:
    request_name: str
    h: LinearMap
    f: LinearMap
    eps: object
    dim: int
    residuals: tuple  # residuals of all requests processed so far


@dataclass(frozen=True)
class GurariiLog:
    spaces: tuple
    links: tuple
    rounds: tuple
    complete: bool  # False when the dimension cap stopped the build


def _link_composite(links, i, j):
    out = None
    for k in range(i, j):
        out = links[k] if out is None else compose(links[k], out)
    return out


def _candidate_requests(h: LinearMap, space: PolyhedralSpace, denom_cap: int):
    """Deterministic stream of norm <= 1 maps A -> space: columns are
    ball vertices scaled by 1/1, 1/2, ..., 1/denom_cap."""
    na = h.domain.dim
    scaled = []
    for d in range(1, denom_cap + 1):
        for v in space.ball_vertices:
            scaled.append(tuple(x / d for x in v))
    scaled.append((ZERO,) * space.dim)
    for cols in product(scaled, repeat=na):
        m = tuple(tuple(cols[c][r] for c in range(na)) for r in range(space.dim))
        f = LinearMap(h.domain, space, m)
        if operator_norm(f) <= 1:
            yield f


def gurarii_build(
    seed: PolyhedralSpace,
    cat: MorphismCatalog,
    rounds: int,
    denom_cap: int = 2,
    dim_cap: Optional[int] = None,
) -> GurariiLog:
    """Iterated exact (eps = 0) pushout amalgamation.

    Round r picks the catalog isometry h round-robin and the next map
    f: A -> K_r from the deterministic candidate stream, then glues B onto
    K_r along the pushout of h and f. Every chain link is an isometry and
    each processed request has residual exactly 0 at all later stages.
    """
    isos = cat.isometries()
    if not isos:
        raise NotAnIsometry("catalog contains no isometries")
    spaces = [seed]
    links: List[LinearMap] = []
    processed: List[Tuple[str, LinearMap, LinearMap, int, LinearMap]] = []
    round_logs = []
    complete = True
    for r in range(rounds):
        entry = isos[r % len(isos)]
        h = entry.map
        current = spaces[-1]
        cap = geometry_cap() if dim_cap is None else dim_cap
        new_dim = h.codomain.dim + current.dim - h.domain.dim
        if h.codomain.dim + current.dim > geometry_cap() or new_dim > cap:
            complete = False
            break
        f = _pick_request(h, current, denom_cap, r, len(isos))
        push = eps_pushout(h, f, 0)
        link = push.leg_from_c  # K_r -> K_{r+1}
        glue = push.leg_from_b  # B -> K_{r+1}
        assert isometry_defect(link).is_isometry
        spaces.append(push.apex)
        links.append(link)
        processed.append((entry.name, h, f, len(links) - 1, glue))
        residuals = []
        for name, ph, pf, stage, pglue in processed:
            tail = _link_composite(links, stage + 1, len(links))
            lhs = compose(pglue, ph)
            rhs = compose(links[stage], pf)
            if tail is not None:
                lhs, rhs = compose(tail, lhs), compose(tail, rhs)
            residuals.append(operator_norm(difference(lhs, rhs)))
        round_logs.append(
            GurariiRound(entry.name, h, f, ZERO, push.apex.dim, tuple(residuals))
        )
    return GurariiLog(tuple(spaces), tuple(links), tuple(round_logs), complete)


def _pick_request(h: LinearMap, space: PolyhedralSpace, denom_cap: int, round_idx: int, ncat: int):
    """The (round // ncat)-th entry of the candidate stream for h."""
    want = round_idx // max(ncat, 1)
    last = None
    for i, f in enumerate(_candidate_requests(h, space, denom_cap)):
        last = f
        if i == want:
            return f
    assert last is not None, "candidate stream is never empty (zero map)"
    return last
