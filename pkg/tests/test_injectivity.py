import pytest

from polyban import (
    LinearMap,
    Q,
    catalog,
    compose,
    difference,
    gurarii_build,
    identity_map,
    injectivity_defect,
    isometry_defect,
    make_space,
    operator_ball_vertices,
    operator_norm,
    product_injectivity,
)
from polyban.errors import DimensionCapExceeded, NotAnIsometry
from polyban.injectivity import (
    best_factorization_error,
    isometric_vertex_candidates,
    lindenstrauss_report,
    saturation_report,
)
from polyban.rationals import ONE, ZERO

from conftest import l1, line, linf, rand_space


def axis(n):
    return LinearMap(line(), linf(n), tuple((ONE,) if i == 0 else (ZERO,) for i in range(n)))


def test_operator_ball_vertices_line_to_line():
    verts = operator_ball_vertices(line(), line())
    assert {v.matrix for v in verts} == {((ONE,),), ((-ONE,),)}


def test_operator_ball_vertices_bound_norm():
    for v in operator_ball_vertices(l1(2), linf(2)):
        assert operator_norm(v) == 1


def test_operator_ball_cap():
    with pytest.raises(DimensionCapExceeded):
        operator_ball_vertices(linf(3), linf(3))


def test_linf_is_injective():
    for n in (2, 3):
        report = injectivity_defect(axis(n), linf(n))
        assert report.value == 0


def test_hyperplane_defect_positive():
    plane = make_space(
        vertices=[(ONE, -ONE), (-ONE, ONE), (ONE, ZERO), (-ONE, ZERO), (ZERO, ONE), (ZERO, -ONE)]
    )
    h = LinearMap(plane, linf(3), ((ONE, ZERO), (ZERO, ONE), (-ONE, -ONE)))
    report = injectivity_defect(h, plane)
    assert report.value == Q(1, 4)


def test_best_factorization_error_witness():
    h = axis(2)
    f = LinearMap(line(), linf(2), ((ONE,), (ONE,)))
    err, g = best_factorization_error(h, f)
    assert err == 0
    assert operator_norm(g) <= 1
    assert compose(g, h).matrix == f.matrix


def test_product_law(rng):
    h = axis(2)
    for _ in range(6):
        k = rand_space(rng, 1)
        l = rand_space(rng, 1)
        combined = product_injectivity(h, k, l)
        dk = injectivity_defect(h, k).value
        dl = injectivity_defect(h, l).value
        assert combined.value == max(dk, dl)


def test_injectivity_rejects_expanding():
    big = LinearMap(line(), linf(2), ((Q(2),), (ZERO,)))
    with pytest.raises(NotAnIsometry):
        injectivity_defect(big, linf(2))


def test_catalog_flags_verified():
    cat = catalog([("axis", axis(2))])
    assert len(cat.isometries()) == 1
    half = LinearMap(line(), linf(2), ((Q(1, 2),), (ZERO,)))
    cat2 = catalog([("axis", axis(2)), ("half", half)])
    assert [e.name for e in cat2.isometries()] == ["axis"]


def test_lindenstrauss_report_clean_for_linf():
    cat = catalog([("axis2", axis(2))])
    rows = lindenstrauss_report(linf(2), cat)
    assert all(report.value == 0 for _, report in rows)


def test_isometric_vertex_candidates():
    cands = isometric_vertex_candidates(line(), linf(2))
    assert cands
    for g in cands:
        assert isometry_defect(g).is_isometry


def test_saturation_certified_zero():
    h = axis(2)
    f = LinearMap(line(), linf(2), ((-ONE,), (ZERO,)))
    records = saturation_report(h, linf(2), [compose(identity_map(linf(2)), f)])
    for rec in records:
        assert rec.best_bound == 0
        assert rec.certified
        g = rec.witness
        assert operator_norm(difference(compose(g, h), f)) == 0


def test_gurarii_build_invariants():
    cat = catalog([("axis", axis(2))])
    log = gurarii_build(line(), cat, 3)
    assert log.complete
    dims = [s.dim for s in log.spaces]
    # each round glues in dim B - dim A = 1 extra dimension
    assert dims == [1, 2, 3, 4]
    for link in log.links:
        assert isometry_defect(link).is_isometry
    for rnd in log.rounds:
        assert all(r == 0 for r in rnd.residuals)


def test_gurarii_stops_at_cap():
    cat = catalog([("axis", axis(2))])
    log = gurarii_build(line(), cat, 10, dim_cap=3)
    assert not log.complete
    assert log.spaces[-1].dim <= 3


def test_gurarii_requires_an_isometry():
    half = LinearMap(line(), linf(2), ((Q(1, 2),), (ZERO,)))
    cat = catalog([("half", half)])
    with pytest.raises(NotAnIsometry):
        gurarii_build(line(), cat, 1)
