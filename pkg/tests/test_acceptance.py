"""Acceptance suite: one test (one pass/fail line under pytest -v) per
criterion. Every comparison is exact rational equality; expected values
were fixed by the independent LP oracles before being asserted here.
"""

import random

import pytest

from polyban import (
    Chain,
    LinearMap,
    Q,
    best_factorization,
    catalog,
    chain_colimit_distance,
    compose,
    decomposition_norm,
    difference,
    embedding,
    eps_pushout,
    factor_through_stage,
    gurarii_build,
    ideal_defect,
    identity_map,
    injectivity_defect,
    isometry_defect,
    make_space,
    operator_norm,
    parse_formula,
    product_injectivity,
    pure_square_defect,
    pushout_mediator,
    repair_fix_basis,
    tensor_map,
    transfer_check,
)
from polyban.purity import coordinate_bound, minimal_extension_norm
from polyban.rationals import ONE, ZERO, vec_add

from conftest import l1, line, linf, rand_map, rand_point, rand_q, rand_space

SEED = 97


def report(n, text):
    print(f"criterion {n}: pass - {text}")


# ----------------------------------------------------------- corpora


def pushout_corpus(rng):
    """30 squares: (f, g, eps) with dims <= 3 and eps in {0, 1/4, 1}.

    Half of the squares use an isometric f (a coordinate inclusion), so
    the stability criterion is exercised nonvacuously.
    """
    squares = []
    eps_values = [Q(0), Q(1, 4), Q(1)]
    for i in range(30):
        eps = eps_values[i % 3]
        a = rand_space(rng, 1)
        db = rng.choice([1, 2, 2, 3])
        dc = rng.choice([1, 2])
        b = rand_space(rng, db, extra=0 if db == 3 else 1)
        c = rand_space(rng, dc)
        if i % 2 == 0:
            # isometric f: include A as the first coordinate of l1(db)
            b = l1(db)
            fm = tuple((ONE,) if r == 0 else (ZERO,) for r in range(db))
            f = LinearMap(a, b, fm) if a == l1(1) else None
            a = l1(1)
            f = LinearMap(a, b, fm)
        else:
            f = rand_map(rng, a, b)
        g = rand_map(rng, a, c)
        squares.append((f, g, eps))
    return squares


def ideal_embeddings():
    axis = embedding(LinearMap(line(), linf(2), ((ONE,), (ZERO,))))
    diag = embedding(LinearMap(line(), linf(2), ((ONE,), (ONE,))))
    axis3 = embedding(LinearMap(line(), linf(3), ((ONE,), (ZERO,), (ZERO,))))
    return [axis, diag, axis3]


def hyperplane_embedding():
    plane = make_space(
        vertices=[(ONE, -ONE), (-ONE, ONE), (ONE, ZERO), (-ONE, ZERO), (ZERO, ONE), (ZERO, -ONE)]
    )
    f = LinearMap(plane, linf(3), ((ONE, ZERO), (ZERO, ONE), (-ONE, -ONE)))
    return embedding(f)


# --------------------------------------------------------- criteria


def test_criterion_01_pushout_gauge_matches_oracle():
    rng = random.Random(SEED)
    squares = pushout_corpus(rng)
    assert len(squares) >= 30
    for f, g, eps in squares:
        push = eps_pushout(f, g, eps)
        db, dc = f.codomain.dim, g.codomain.dim
        for _ in range(20):
            x = rand_point(rng, db, 3, 3)
            y = rand_point(rng, dc, 3, 3)
            apex_pt = vec_add(push.leg_from_b(x), push.leg_from_c(y))
            assert push.apex.norm(apex_pt) == decomposition_norm(push, x, y)
    report(1, "apex gauge equals the decomposition LP on 30 squares x 20 points")


def test_criterion_02_universal_property():
    rng = random.Random(SEED + 1)
    squares = pushout_corpus(rng)
    cocones = 0
    for f, g, eps in squares:
        push = eps_pushout(f, g, eps)
        d = rand_space(rng, rng.choice([1, 2]))
        for _ in range(20):
            t0 = rand_map(rng, push.apex, d)
            g_prime = compose(t0, push.leg_from_b)
            f_prime = compose(t0, push.leg_from_c)
            t = pushout_mediator(push, f_prime, g_prime)
            assert compose(t, push.leg_from_b).matrix == g_prime.matrix
            assert compose(t, push.leg_from_c).matrix == f_prime.matrix
            assert operator_norm(t) <= 1
            assert t.matrix == t0.matrix  # legs jointly span: unique
            cocones += 1
    assert cocones >= 20 * len(squares)
    report(2, f"mediator exists, exact, contractive, unique on {cocones} cocones")


def test_criterion_03_isometry_stability():
    rng = random.Random(SEED + 2)
    squares = pushout_corpus(rng)
    checked = 0
    for f, g, eps in squares:
        push = eps_pushout(f, g, eps)
        if isometry_defect(f).is_isometry:
            d = isometry_defect(push.leg_from_c)
            assert (d.upper, d.lower) == (0, 0)
            checked += 1
        if isometry_defect(g).is_isometry:
            d = isometry_defect(push.leg_from_b)
            assert (d.upper, d.lower) == (0, 0)
            checked += 1
    assert checked >= 15
    report(3, f"legs opposite isometric inputs are isometric ({checked} cases)")


def test_criterion_04_composition_defect_bound():
    rng = random.Random(SEED + 3)
    pairs = 0
    while pairs < 100:
        da, db, dc = (rng.choice([1, 2]) for _ in range(3))
        a, b, c = rand_space(rng, da), rand_space(rng, db), rand_space(rng, dc)
        f = rand_map(rng, a, b)
        g = rand_map(rng, b, c)
        df, dg = isometry_defect(f), isometry_defect(g)
        dgf = isometry_defect(compose(g, f))
        assert dgf.weak <= df.weak + dg.weak
        pairs += 1
    report(4, "weak-defect subadditivity holds on 100 composable pairs")


def test_criterion_05_ideal_iff_pure():
    rng = random.Random(SEED + 4)
    # anchor values, fixed by the extension-norm LP oracle
    axis = ideal_embeddings()[0]
    assert ideal_defect(axis).value == 0
    hyper = hyperplane_embedding()
    assert minimal_extension_norm(hyper)[0] == Q(4, 3)
    assert ideal_defect(hyper).value == Q(1, 3)

    for e in ideal_embeddings():
        assert ideal_defect(e).value == 0
        k, l = e.subspace, e.ambient
        for _ in range(50):
            # commuting square: g includes A into B = A (+) extra coords,
            # v agrees with f u on the A block, so f u = v g by design
            a = rand_space(rng, 1)
            extra = rng.choice([0, 1])
            u = rand_map(rng, a, k)
            db = 1 + extra
            b = l1(db)
            g = LinearMap(a, b, tuple((ONE,) if r == 0 else (ZERO,) for r in range(db)))
            fu = compose(e.map, u)
            cols = [tuple(fu.matrix[r][0] for r in range(l.dim))]
            for _ in range(extra):
                w = rand_point(rng, l.dim, 2, 2)
                nw = l.norm(w)
                if nw > 1:
                    w = tuple(x / nw for x in w)
                cols.append(w)
            v = LinearMap(b, l, tuple(tuple(col[r] for col in cols) for r in range(l.dim)))
            scale = max(ONE, operator_norm(v))
            u = LinearMap(a, k, tuple(tuple(x / scale for x in row) for row in u.matrix))
            v = LinearMap(b, l, tuple(tuple(x / scale for x in row) for row in v.matrix))
            assert pure_square_defect(e, g, u, v).value == 0

    # a non-ideal embedding exhibits a canonical square with positive defect
    canon = pure_square_defect(
        hyper, hyper.map, identity_map(hyper.subspace), identity_map(hyper.ambient)
    )
    assert canon.value == Q(1, 4)  # oracle-confirmed
    report(5, "ideal anchors exact (0 and 1/3); 50 squares per ideal all pure")


def formula_battery(rng, count):
    """Randomized single-free-variable pp-formulas."""
    out = []
    templates = [
        "norm(x1) <= {q}",
        "EXISTS y . x1 + y = 0 AND norm(y) <= {q}",
        "EXISTS y . x1 - {c} * y = 0 AND norm(y) <= {q}",
        "EXISTS y, z . x1 + y - z = 0 AND norm(y) <= {q} AND norm(z) <= {r}",
        "EXISTS y . {c} * x1 + y = 0 AND norm(y) <= {q} AND norm(x1) <= {r}",
    ]
    while len(out) < count:
        t = rng.choice(templates)
        text = t.format(
            q=f"{rng.randint(0, 3)}/{rng.randint(1, 4)}",
            r=f"{rng.randint(1, 3)}/{rng.randint(1, 2)}",
            c=f"{rng.randint(1, 3)}",
        )
        out.append(parse_formula(text))
    return out


def test_criterion_06_satisfaction_transfer():
    rng = random.Random(SEED + 5)
    for e in ideal_embeddings():
        battery = formula_battery(rng, 100)
        assert ideal_defect(e).value == 0
        for phi in battery:
            x = rand_q(rng, 3, 3)
            ambient_vec = tuple(x * c for c in e.intersection_basis[0])
            slack_k, slack_l = transfer_check(e, phi, [ambient_vec])
            assert slack_k.satisfied == slack_l.satisfied

    from polyban import distinguishing_formula

    hyper = hyperplane_embedding()
    phi, assignment = distinguishing_formula(hyper)
    slack_k, slack_l = transfer_check(hyper, phi, assignment)
    assert slack_l.satisfied
    assert slack_k.kind == "finite" and slack_k.value == Q(1, 3)
    report(6, "sign agreement on 300 formulas; distinguishing gap is exactly 1/3")


def chain_corpus(rng):
    """20 chains of coordinate inclusions between l1 spaces, plus probes."""
    chains = []
    for _ in range(20):
        dims = sorted(rng.sample([1, 2, 3], k=rng.choice([2, 3])))
        spaces = [l1(d) for d in dims]
        links = []
        for s, t in zip(spaces, spaces[1:]):
            m = tuple(
                tuple(ONE if r == c else ZERO for c in range(s.dim)) for r in range(t.dim)
            )
            links.append(LinearMap(s, t, m))
        chains.append(Chain(tuple(spaces), tuple(links)))
    return chains


def test_criterion_07_finite_scale_factorization():
    rng = random.Random(SEED + 6)
    for chain in chain_corpus(rng):
        a = rand_space(rng, 1)
        f = rand_map(rng, a, chain.last)
        eps = Q(rng.randint(1, 3), 8)
        stage, g = factor_through_stage(chain, f, eps)
        dist, _ = best_factorization(chain, f, stage)
        assert dist <= eps
        if stage > 0:
            prev, _ = best_factorization(chain, f, stage - 1)
            assert prev is None or prev > eps
        # distance sequences are nonincreasing, ending at the final norm
        h = rand_map(rng, a, chain.spaces[0])
        h2 = rand_map(rng, a, chain.spaces[0])
        seq = chain_colimit_distance(chain, h, h2, 0)
        assert all(x >= y for x, y in zip(seq, seq[1:]))
        n = len(chain.spaces) - 1
        last = compose(chain.composite(0, n), difference(h, h2))
        assert seq[-1] == operator_norm(last)
    report(7, "least stage verified against stage-1 infeasibility on 20 chains")


def test_criterion_08_tensor_preserves_ideals():
    factors = [l1(1), l1(2), linf(2)]
    for e in ideal_embeddings():
        assert ideal_defect(e).value == 0
        for k in factors:
            if k.dim * e.ambient.dim > 6:
                continue
            t = tensor_map(k, e.map)
            assert ideal_defect(embedding(t)).value == 0
    report(8, "tensoring by R, l1(2), linf(2) keeps every corpus ideal at defect 0")


def test_criterion_09_injectivity_product_law():
    rng = random.Random(SEED + 7)
    h = LinearMap(line(), linf(2), ((ONE,), (ZERO,)))
    triples = 0
    while triples < 20:
        k = rand_space(rng, rng.choice([1, 2]))
        l = rand_space(rng, 1)
        if h.domain.dim * (k.dim + l.dim) > 6:
            continue
        combined = product_injectivity(h, k, l)
        dk = injectivity_defect(h, k).value
        dl = injectivity_defect(h, l).value
        assert combined.value == max(dk, dl)
        triples += 1

    # linf(n) for n <= 3 is injective against the full isometry catalog
    iso_catalog = [
        LinearMap(line(), linf(2), ((ONE,), (ZERO,))),
        LinearMap(line(), linf(2), ((ONE,), (ONE,))),
        LinearMap(line(), l1(2), ((ONE,), (ZERO,))),
        LinearMap(l1(2), linf(2), ((ONE, ONE), (ONE, -ONE))),
    ]
    for iso in iso_catalog:
        assert isometry_defect(iso).is_isometry
    for n in (1, 2, 3):
        target = linf(n)
        for iso in iso_catalog:
            if iso.domain.dim * n > 6:
                continue
            assert injectivity_defect(iso, target).value == 0
    report(9, "product law exact on 20 triples; linf(1..3) defect 0 on the catalog")


def test_criterion_10_gurarii_builder():
    axis = LinearMap(line(), linf(2), ((ONE,), (ZERO,)))
    diag = LinearMap(line(), linf(2), ((ONE,), (ONE,)))
    cat = catalog([("axis", axis), ("diag", diag)])
    log = gurarii_build(line(), cat, 3)
    assert log.complete
    assert len(log.rounds) == 3
    dim = 1
    for rnd in log.rounds:
        expected = rnd.h.codomain.dim + dim - rnd.h.domain.dim
        assert rnd.dim == expected
        dim = expected
        assert all(r == 0 for r in rnd.residuals)
    for link in log.links:
        d = isometry_defect(link)
        assert (d.upper, d.lower) == (0, 0)
    report(10, "3-round build: residuals 0, links isometric, dims 1,2,3,4")


def test_criterion_11_repair_bound():
    rng = random.Random(SEED + 8)
    domains = [l1(2), linf(2)]
    codomains = [linf(2), l1(2), linf(3)]
    done = 0
    while done < 50:
        b = rng.choice(domains)
        k = rng.choice(codomains)
        t_prime = rand_map(rng, b, k)
        eps = Q(rng.randint(1, 4), 8)
        delta = eps / (b.dim * coordinate_bound(b))
        targets = []
        for j in range(rng.choice([1, b.dim])):
            col = tuple(row[j] for row in t_prime.matrix)
            shift = rand_point(rng, k.dim, 1, 8)
            ns = k.norm(shift)
            if ns > delta:
                shift = tuple(x * delta / ns for x in shift)
            targets.append(tuple(a + s for a, s in zip(col, shift)))
        t = repair_fix_basis(t_prime, targets, eps)
        for j, target in enumerate(targets):
            assert tuple(row[j] for row in t.matrix) == target
        assert operator_norm(difference(t, t_prime)) <= eps
        done += 1
    report(11, "repaired maps stay within eps on 50 randomized perturbations")
