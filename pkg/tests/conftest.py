"""Shared builders for the test suite.

All randomness is seeded so every run sees the same corpus; all values
are exact rationals.
"""

import random

import pytest

from polyban import LinearMap, PolyhedralSpace, Q, make_space, operator_norm
from polyban.rationals import ONE, ZERO


def l1(n: int) -> PolyhedralSpace:
    verts = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        verts.append(tuple(e))
        verts.append(tuple(-x for x in e))
    return make_space(vertices=verts)


def linf(n: int) -> PolyhedralSpace:
    facets = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        facets.append(tuple(e))
        facets.append(tuple(-x for x in e))
    return make_space(facets=facets)


def line() -> PolyhedralSpace:
    return l1(1)


def rand_q(rng: random.Random, max_num: int = 3, max_den: int = 3) -> Q:
    return Q(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def rand_space(rng: random.Random, dim: int, extra: int = 1) -> PolyhedralSpace:
    """A random symmetric full-dimensional polytope: the unit cross-polytope
    vertices plus a few random symmetric pairs."""
    verts = []
    for i in range(dim):
        e = [ZERO] * dim
        e[i] = ONE
        verts.append(tuple(e))
        verts.append(tuple(-x for x in e))
    for _ in range(extra):
        v = tuple(rand_q(rng, 2, 2) for _ in range(dim))
        verts.append(v)
        verts.append(tuple(-x for x in v))
    return make_space(vertices=verts)


def rand_map(rng: random.Random, dom: PolyhedralSpace, cod: PolyhedralSpace) -> LinearMap:
    """A random map of operator norm <= 1 (scaled down when needed)."""
    m = tuple(
        tuple(rand_q(rng) for _ in range(dom.dim)) for _ in range(cod.dim)
    )
    f = LinearMap(dom, cod, m)
    nrm = operator_norm(f)
    if nrm > 1:
        m = tuple(tuple(x / nrm for x in row) for row in m)
        f = LinearMap(dom, cod, m)
    return f


def rand_point(rng: random.Random, dim: int, max_num: int = 5, max_den: int = 4):
    return tuple(rand_q(rng, max_num, max_den) for _ in range(dim))


@pytest.fixture
def rng():
    return random.Random(20240823)
