import pytest

from polyban import (
    LinearMap,
    Q,
    compose,
    difference,
    identity_map,
    is_injective,
    isometry_defect,
    min_norm_on_sphere,
    operator_norm,
    tensor_map,
)
from polyban.errors import DimensionMismatch
from polyban.rationals import ONE, ZERO

from conftest import l1, linf, rand_map, rand_point, rand_space


def test_identity_is_isometry(rng):
    for dim in (1, 2, 3):
        space = rand_space(rng, dim)
        d = isometry_defect(identity_map(space))
        assert (d.upper, d.lower) == (0, 0)
        assert d.is_isometry


def test_operator_norm_examples():
    half = LinearMap(l1(2), l1(2), ((Q(1, 2), ZERO), (ZERO, Q(1, 2))))
    assert operator_norm(half) == Q(1, 2)
    d = isometry_defect(half)
    assert d.upper == 0 and d.lower == Q(1, 2)
    assert not d.is_isometry
    assert d.weak == Q(1, 2)


def test_operator_norm_bounds_images(rng):
    a = rand_space(rng, 2)
    b = rand_space(rng, 3)
    for _ in range(15):
        f = rand_map(rng, a, b)
        nrm = operator_norm(f)
        for _ in range(10):
            x = rand_point(rng, 2)
            assert b.norm(f(x)) <= nrm * a.norm(x)
        # attained at some ball vertex
        assert any(b.norm(f(v)) == nrm for v in a.ball_vertices)


def test_min_norm_on_sphere(rng):
    a = rand_space(rng, 2)
    b = rand_space(rng, 2)
    for _ in range(10):
        f = rand_map(rng, a, b)
        m = min_norm_on_sphere(f)
        for _ in range(15):
            x = rand_point(rng, 2)
            nx = a.norm(x)
            if nx != 0:
                assert b.norm(f(x)) >= m * nx
        if is_injective(f):
            assert m > 0
        else:
            assert m == 0


def test_l1_to_linf_inclusion():
    inc = identity_map(l1(2))
    f = LinearMap(l1(2), linf(2), inc.matrix)
    assert operator_norm(f) == 1
    assert min_norm_on_sphere(f) == Q(1, 2)  # (1,1)/2 has l1 norm 1, linf norm 1/2
    d = isometry_defect(f)
    assert (d.upper, d.lower) == (0, Q(1, 2))


def test_composition_norm_submultiplicative(rng):
    a, b, c = rand_space(rng, 2), rand_space(rng, 2), rand_space(rng, 2)
    for _ in range(20):
        f = rand_map(rng, a, b)
        g = rand_map(rng, b, c)
        assert operator_norm(compose(g, f)) <= operator_norm(g) * operator_norm(f)


def test_composition_defect_bound(rng):
    # max-defect(g f) <= max-defect(f) + max-defect(g)
    a, b, c = rand_space(rng, 2), rand_space(rng, 2), rand_space(rng, 2)
    for _ in range(25):
        f = rand_map(rng, a, b)
        g = rand_map(rng, b, c)
        df, dg = isometry_defect(f), isometry_defect(g)
        dgf = isometry_defect(compose(g, f))
        assert max(dgf.upper, dgf.lower) <= max(df.upper, df.lower) + max(dg.upper, dg.lower)


def test_difference_triangle(rng):
    a, b = rand_space(rng, 2), rand_space(rng, 2)
    for _ in range(10):
        f = rand_map(rng, a, b)
        g = rand_map(rng, a, b)
        assert operator_norm(difference(f, g)) <= operator_norm(f) + operator_norm(g)


def test_tensor_map_of_isometry_is_isometry():
    f = identity_map(l1(2))
    t = tensor_map(l1(2), f)
    assert t.domain.dim == 4
    assert isometry_defect(t).is_isometry


def test_shape_validation():
    with pytest.raises(DimensionMismatch):
        LinearMap(l1(2), l1(2), ((ONE,),))
    with pytest.raises(DimensionMismatch):
        compose(identity_map(l1(2)), identity_map(l1(3)))
