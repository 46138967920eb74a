"""Finite-dimensional normed spaces with polyhedral unit balls.

A space stores both descriptions of its ball eagerly: the extreme points
and the facet functionals (all with offset 1), each the polar of the
other. Norm evaluation is a max over facets; operator norms (maps module)
maximize over vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    EmptyInput,
    NotFullDimensional,
    NotSymmetric,
)
from .geometry import (
    check_dim_cap,
    convex_hull_facets,
    extreme_points,
    vertex_enumerate,
)
from .errors import DegenerateSystem, UnboundedPolytope
from .rationals import ONE, ZERO, dot, rank, vec, vec_neg


@dataclass(frozen=True)
class PolyhedralSpace:
    """A normed space whose unit ball is a symmetric polytope."""

    dim: int
    ball_vertices: tuple  # extreme points of the unit ball
    ball_facets: tuple  # functionals phi with ball = {x : phi.x <= 1}

    def norm(self, v: Sequence):
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in dim {self.dim}")
        v = vec(v)
        best = ZERO
        for phi in self.ball_facets:
            val = dot(phi, v)
            if val > best:
                best = val
        return best

    def contains_in_ball(self, v: Sequence) -> bool:
        v = vec(v)
        return all(dot(phi, v) <= 1 for phi in self.ball_facets)

    def __repr__(self):  # terse; full data is rarely wanted in tracebacks
        return f"PolyhedralSpace(dim={self.dim}, V={len(self.ball_vertices)}, F={len(self.ball_facets)})"


ZERO_SPACE = PolyhedralSpace(0, (), ())


def make_space(vertices: Iterable[Sequence] = None, facets: Iterable[Sequence] = None) -> PolyhedralSpace:
    """Build a space from a vertex list or a facet-functional list.

    Asymmetric input is rejected, never silently symmetrized.
    """
    if (vertices is None) == (facets is None):
        raise ValueError("give exactly one of vertices= or facets=")
    raw = [vec(p) for p in (vertices if vertices is not None else facets)]
    if not raw:
        raise EmptyInput("no points given")
    dim = len(raw[0])
    if any(len(p) != dim for p in raw):
        raise DimensionMismatch("ragged coordinate lists")
    if dim == 0:
        return ZERO_SPACE
    check_dim_cap(dim)
    pts = set(raw)
    for p in pts:
        if vec_neg(p) not in pts:
            raise NotSymmetric(f"point {p} present without its negative")
    if vertices is not None:
        if rank(sorted(pts)) < dim:
            raise NotFullDimensional("ball has empty interior (seminorm)")
        hull = convex_hull_facets(sorted(pts))
        functionals = _offset_one(hull)
        verts = tuple(extreme_points(sorted(pts), hull))
    else:
        if rank(sorted(pts)) < dim:
            # functionals do not separate points: gauge is a seminorm
            raise NotFullDimensional("facet functionals do not span the dual")
        try:
            verts = tuple(vertex_enumerate([(phi, ONE) for phi in pts]))
        except UnboundedPolytope as exc:  # pragma: no cover - caught by rank above
            raise NotFullDimensional(str(exc))
        except DegenerateSystem as exc:
            raise NotFullDimensional(str(exc))
        # canonicalize: the irredundant facet set is the hull of the polar
        hull = convex_hull_facets(verts)
        functionals = _offset_one(hull)
    return PolyhedralSpace(dim, tuple(sorted(verts)), tuple(sorted(functionals)))


def _offset_one(facets):
    out = []
    for n, b in facets:
        if b <= 0:
            raise NotFullDimensional("origin is not interior to the ball")
        out.append(tuple(a / b for a in n))
    return out


def norm(space: PolyhedralSpace, v: Sequence):
    return space.norm(v)


def dual_space(space: PolyhedralSpace) -> PolyhedralSpace:
    """Polar-dual space: vertices and facet functionals swap roles."""
    if space.dim == 0:
        return ZERO_SPACE
    return PolyhedralSpace(
        space.dim,
        tuple(sorted(space.ball_facets)),
        tuple(sorted(space.ball_vertices)),
    )


def direct_sum(k: PolyhedralSpace, l: PolyhedralSpace, kind: str) -> PolyhedralSpace:
    """kind='sum': ball = conv(B_K x 0 u 0 x B_L)  (the coproduct norm);
    kind='max': ball = B_K x B_L  (the product norm)."""
    if kind not in ("sum", "max"):
        raise ValueError(f"bad kind {kind!r}")
    if k.dim == 0:
        return l
    if l.dim == 0:
        return k
    # no cap here: both descriptions come from the factors without any
    # hull computation, so high-dimensional sums stay cheap
    dim = k.dim + l.dim
    zk, zl = (ZERO,) * k.dim, (ZERO,) * l.dim
    if kind == "sum":
        verts = [v + zl for v in k.ball_vertices] + [zk + w for w in l.ball_vertices]
        facets = [p + q for p in k.ball_facets for q in l.ball_facets]
    else:
        verts = [v + w for v in k.ball_vertices for w in l.ball_vertices]
        facets = [p + zl for p in k.ball_facets] + [zk + q for q in l.ball_facets]
    return PolyhedralSpace(dim, tuple(sorted(verts)), tuple(sorted(facets)))


def projective_tensor(k: PolyhedralSpace, l: PolyhedralSpace) -> PolyhedralSpace:
    """Projective tensor product; ball = conv{u (x) v} over ball vertices."""
    if k.dim == 0 or l.dim == 0:
        return ZERO_SPACE
    dim = k.dim * l.dim
    check_dim_cap(dim, "tensor dimension")
    pts = {tuple(a * b for a in u for b in v) for u in k.ball_vertices for v in l.ball_vertices}
    return make_space(vertices=sorted(pts))


def tensor_coords(i: int, j: int, ldim: int) -> int:
    """Flat index of e_i (x) e_j in the row-major tensor coordinates."""
    return i * ldim + j
