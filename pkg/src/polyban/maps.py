"""Linear maps between polyhedral spaces: operator norms, isometry
defects, composition, and the induced map on projective tensor products.

The operator norm is a max over domain ball vertices. The lower isometry
defect needs the minimum of the convex piecewise-linear function ||f.||
over the unit sphere; that is computed exactly, one LP per
(domain facet, active codomain facet) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch
from .lp import EQ, GE, LE, lp_solve, make_lp
from .rationals import (
    ONE,
    ZERO,
    dot,
    identity,
    kron,
    mat,
    mat_mul,
    mat_sub,
    mat_vec,
    rank,
)
from .spaces import PolyhedralSpace, projective_tensor


@dataclass(frozen=True)
class LinearMap:
    domain: PolyhedralSpace
    codomain: PolyhedralSpace
    matrix: tuple  # codomain.dim x domain.dim

    def __post_init__(self):
        m = self.matrix
        if len(m) != self.codomain.dim or any(len(r) != self.domain.dim for r in m):
            raise DimensionMismatch(
                f"matrix {len(m)}x{len(m[0]) if m else 0} between "
                f"dim {self.domain.dim} and dim {self.codomain.dim}"
            )

    def __call__(self, v):
        if len(v) != self.domain.dim:
            raise DimensionMismatch("vector does not match domain")
        return mat_vec(self.matrix, v)

    def __repr__(self):
        return f"LinearMap({self.domain.dim}->{self.codomain.dim})"


def linear_map(domain, codomain, matrix) -> LinearMap:
    return LinearMap(domain, codomain, mat(matrix))


def identity_map(space: PolyhedralSpace) -> LinearMap:
    return LinearMap(space, space, identity(space.dim))


@dataclass(frozen=True)
class IsometryDefect:
    upper: object  # max over the ball of (||fx|| - ||x||)_+
    lower: object  # max over the sphere of (||x|| - ||fx||)_+

    @property
    def weak(self):
        """Least eps such that f is a weak eps-isometry."""
        return max(self.upper, self.lower)

    @property
    def is_isometry(self) -> bool:
        return self.upper == 0 and self.lower == 0


def operator_norm(f: LinearMap):
    """Max of the codomain norm over domain ball vertices (= over the ball)."""
    best = ZERO
    for v in f.domain.ball_vertices:
        n = f.codomain.norm(f(v))
        if n > best:
            best = n
    return best


def min_norm_on_sphere(f: LinearMap):
    """Exact min of ||f x|| over the unit sphere of the domain.

    For each sphere facet F and each codomain facet psi, minimizes
    psi(f x) over the region of F where psi attains the max; the union of
    regions covers F, so the global minimum over all pairs is exact.
    """
    dom, cod = f.domain, f.codomain
    if dom.dim == 0:
        return ZERO
    n = dom.dim
    best = None
    fm = f.matrix
    cod_rows = [tuple(dot(psi, col) for col in zip(*fm)) for psi in cod.ball_facets]
    # cod_rows[i] . x == psi_i(f x)
    if not cod_rows:  # codomain is {0}
        cod_rows = [(ZERO,) * n]
    for phi_f in dom.ball_facets:
        base = [(phi, LE, ONE) for phi in dom.ball_facets]
        base.append((phi_f, EQ, ONE))
        for i, row_i in enumerate(cod_rows):
            constraints = list(base)
            for j, row_j in enumerate(cod_rows):
                if j == i:
                    continue
                diff = tuple(a - b for a, b in zip(row_i, row_j))
                constraints.append((diff, GE, ZERO))
            res = lp_solve(make_lp(n, row_i, "min", constraints))
            if res.is_optimal and (best is None or res.optimum < best):
                best = res.optimum
    assert best is not None
    return best


def isometry_defect(f: LinearMap) -> IsometryDefect:
    upper = operator_norm(f) - ONE
    if upper < 0:
        upper = ZERO
    if f.domain.dim == 0:
        return IsometryDefect(ZERO, ZERO)
    lower = ONE - min_norm_on_sphere(f)
    if lower < 0:
        lower = ZERO
    return IsometryDefect(upper, lower)


def compose(g: LinearMap, f: LinearMap) -> LinearMap:
    """g after f."""
    if g.domain is not f.codomain and g.domain != f.codomain:
        raise DimensionMismatch("compose: domain of g != codomain of f")
    return LinearMap(f.domain, g.codomain, mat_mul(g.matrix, f.matrix))


def difference(f: LinearMap, g: LinearMap) -> LinearMap:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DimensionMismatch("difference of maps with different types")
    return LinearMap(f.domain, f.codomain, mat_sub(f.matrix, g.matrix))


def tensor_map(k: PolyhedralSpace, f: LinearMap) -> LinearMap:
    """id_K (x) f between the projective tensor spaces."""
    dom = projective_tensor(k, f.domain)
    cod = projective_tensor(k, f.codomain)
    return LinearMap(dom, cod, kron(identity(k.dim), f.matrix))


def is_injective(f: LinearMap) -> bool:
    return rank(f.matrix) == f.domain.dim
