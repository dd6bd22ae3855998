import math
from fractions import Fraction as F

import pytest
import sympy as sp

from okbody import geometry
from okbody.errors import ComputationError, ModelError
from okbody.sections import CurveDivisor, ProjectiveTwist, ToricPolytopeModel, VeroneseSurface
from okbody.semigroup import (
    body_estimate,
    build,
    conic_flag,
    is_generated_up_to,
    nested_bodies,
    stabilized_body,
    vertex_hit_check,
    volume_denominator_check,
    weighted_projective_data,
)
from okbody.valuation import CoordinateFlag, ToricFlag, hypersurface_flag
from oracles import brute_hull_2d, conic_flag_values, coordinate_flag_values, lattice_points_2d


def V(P):
    return [tuple(v) for v in P.vertices]


def test_build_examples():
    g = build(VeroneseSurface(), conic_flag(), 1)
    assert g.levels[1] == {(0, 0), (1, 0), (0, 1), (0, 2), (0, 3), (0, 4)}
    assert build(CurveDivisor(4), None, 1).levels[1] == {(j,) for j in range(5)}
    plane = build(ProjectiveTwist(2, 1), CoordinateFlag.affine(("u", "v", "w"), "u"), 2)
    assert plane.levels[2] == {(a, b) for a in range(3) for b in range(3) if a + b <= 2}


def test_build_rejects_mismatched_flag():
    with pytest.raises(ModelError, match="dimension mismatch"):
        build(ProjectiveTwist(3, 1), conic_flag(), 1)
    with pytest.raises(ModelError):
        build(ToricPolytopeModel(((0, 0), (1, 0), (0, 1))), conic_flag(), 1)


# exact value sets against linear algebra over all sections -----------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_conic_levels_equal_value_sets_of_all_sections(m):
    assert build(VeroneseSurface(), conic_flag(), m).levels[m] == conic_flag_values(m)


@pytest.mark.parametrize("n,d,m", [(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1), (1, 3, 2)])
def test_hypersurface_levels_equal_value_sets(n, d, m):
    model = ProjectiveTwist(n, d)
    flag = hypersurface_flag(model.variables, d)
    xs = sp.symbols(model.variables)
    zs = sp.symbols(" ".join(f"z{i}" for i in range(1, n + 1)) + ("," if n == 1 else ""))
    # chart x0 = 1, x_n = z_n, x_i = z_i + x_(i+1)^d, written out independently
    chart = {xs[0]: sp.Integer(1), xs[n]: zs[n - 1]}
    for i in range(n - 1, 0, -1):
        chart[xs[i]] = zs[i - 1] + chart[xs[i + 1]] ** d
    chart = {x: chart[x] for x in xs}
    exps = [next(iter(p.terms)) for p in model.basis(m).elements]
    want = coordinate_flag_values(exps, chart, zs, n)
    got = build(model, flag, m).levels[m]
    assert got == want
    assert len(got) == model.h0(m)


# closure, monotonicity, homogeneity ----------------------------------------------

CASES = {
    "veronese": (VeroneseSurface(), conic_flag()),
    "plane-conics": (ProjectiveTwist(2, 2), None),
    "plane-lines-coordinate": (ProjectiveTwist(2, 1), CoordinateFlag.affine(("u", "v", "w"), "u")),
    "curve": (CurveDivisor(3), None),
    "toric-blp": (ToricPolytopeModel(((1, 0), (2, 0), (0, 2), (0, 1))), ToricFlag((0, 2), ((1, 0), (-1, -1)))),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_additive_closure(name):
    model, flag = CASES[name]
    g = build(model, flag, 6 if name != "plane-conics" else 5)
    assert g.closure_violations() == []
    assert all(g.levels[m] for m in g.levels)


@pytest.mark.parametrize("name", sorted(CASES))
def test_hull_grows_with_bound(name):
    model, flag = CASES[name]
    bodies = [body_estimate(build(model, flag, M)) for M in (1, 2, 4)]
    for small, big in zip(bodies, bodies[1:]):
        assert small.issubset(big)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n,d", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_homogeneity(n, d, p):
    base = ProjectiveTwist(n, d)
    flag = hypersurface_flag(base.variables, d)
    small = stabilized_body(base, flag, 6)
    big = stabilized_body(ProjectiveTwist(n, p * d), flag, 6)
    assert small.stabilized and big.stabilized
    assert big.polytope == geometry.affine_image(small.polytope, p)


@pytest.mark.parametrize("p", [2, 3])
def test_homogeneity_coordinate_flag(p):
    flag = CoordinateFlag.affine(("u", "v", "w"), "u")
    small = stabilized_body(ProjectiveTwist(2, 1), flag, 4).polytope
    big = stabilized_body(ProjectiveTwist(2, p), flag, 4).polytope
    assert big == geometry.affine_image(small, p)


# bodies ------------------------------------------------------------------------


def test_body_estimate_examples():
    g = build(ProjectiveTwist(2, 1), CoordinateFlag.affine(("u", "v", "w"), "u"), 1)
    assert V(body_estimate(g)) == [(0, 0), (0, 1), (1, 0)]
    assert V(body_estimate(build(VeroneseSurface(), conic_flag(), 3))) == [(0, 0), (0, 4), (1, 0)]
    assert V(body_estimate(build(CurveDivisor(7), None, 1))) == [(0,), (7,)]


def test_stabilized_examples():
    r = stabilized_body(ProjectiveTwist(2, 2), None, 12)
    assert r.stabilized and V(r.polytope) == [(0, 0), (0, 4), (1, 0)]
    r = stabilized_body(CurveDivisor(6), None, 12)
    assert r == (geometry.hull([(0,), (6,)]), True, 2)
    with pytest.raises(ComputationError):
        stabilized_body(CurveDivisor(6), None, 1)


@pytest.mark.parametrize("vertices,vertex,B", [
    (((0, 0), (1, 0), (0, 1)), (0, 1), ((1, 0), (-1, -1))),
    (((1, 0), (2, 0), (0, 2), (0, 1)), (0, 2), ((1, 0), (-1, -1))),
    (((0, 0), (3, 0), (0, 2), (3, 2)), (0, 0), ((1, 0), (0, 1))),
    (((0, 0), (2, 0), (0, 2), (1, 2), (2, 1)), (2, 0), ((0, 1), (-1, 0))),
])
def test_toric_body_is_unimodular_image(vertices, vertex, B):
    cycle = geometry.hull(vertices).cyclic_vertices()
    image = [tuple(sum(b * (p - v) for b, p, v in zip(row, pt, vertex)) for row in B) for pt in lattice_points_2d(cycle)]
    r = stabilized_body(ToricPolytopeModel(vertices), ToricFlag(vertex, B), 6)
    assert r.stabilized
    assert V(r.polytope) == brute_hull_2d(image)


def test_toric_blp_up_to_twenty():
    # H on the blow-up is the unit triangle; enumerate far past stabilization
    g = build(ToricPolytopeModel(((0, 0), (1, 0), (0, 1))), ToricFlag((0, 1), ((1, 0), (-1, -1))), 20)
    assert V(body_estimate(g)) == [(0, 0), (0, 1), (1, 0)]


@pytest.mark.parametrize("name", ["veronese", "plane-conics", "curve"])
def test_volume_identity(name):
    model, flag = CASES[name]
    P = stabilized_body(model, flag).polytope
    assert math.factorial(model.dim) * geometry.volume(P) == model.self_intersection()


# finite generation ---------------------------------------------------------------


def test_generation_examples():
    g = build(ProjectiveTwist(2, 1), CoordinateFlag.affine(("u", "v", "w"), "u"), 4)
    assert is_generated_up_to(g, [(1, v) for v in g.levels[1]], 4).generated_up_to == 4
    g = build(VeroneseSurface(), conic_flag(), 5)
    rep = is_generated_up_to(g, [(1, v) for v in g.levels[1]], 5)
    assert rep.generated_up_to == 5 and rep.witnesses_missing == [] and rep.vertex_hit
    g = build(CurveDivisor(2), None, 3)
    rep = is_generated_up_to(g, [(1, (0,)), (1, (1,))], 3)
    assert (1, (2,)) in rep.witnesses_missing and rep.generated_up_to == 0


def test_generation_matches_brute_force_sums():
    g = build(VeroneseSurface(), conic_flag(), 4)
    gens = sorted(g.levels[1])
    sums = {1: set(gens)}
    for m in range(2, 5):
        sums[m] = {tuple(a + b for a, b in zip(x, y)) for x in sums[m - 1] for y in gens}
    assert all(sums[m] == g.levels[m] for m in range(1, 5))


def test_generator_outside_semigroup_rejected():
    g = build(CurveDivisor(2), None, 2)
    with pytest.raises(ComputationError):
        is_generated_up_to(g, [(1, (3,))], 2)


def test_vertex_hit_examples():
    g = build(VeroneseSurface(), conic_flag(), 3)
    body = body_estimate(g)
    assert vertex_hit_check(g, body)
    c = build(CurveDivisor(4), None, 2)
    assert vertex_hit_check(c, body_estimate(c))
    assert not vertex_hit_check(g.without(1, (0, 4)), body)


@pytest.mark.parametrize("name", sorted(CASES))
def test_vertex_hit_implies_generation(name):
    model, flag = CASES[name]
    for M in (2, 4):
        g = build(model, flag, M)
        rep = is_generated_up_to(g, [(1, v) for v in g.levels[1]], M)
        if rep.vertex_hit:
            assert rep.generated_up_to == M


# toric data and denominators --------------------------------------------------------


def test_weighted_projective_data():
    assert V(weighted_projective_data(2, 4)) == [(0, 0), (0, 4), (1, 0)]
    assert V(weighted_projective_data(1, 1)) == [(0,), (1,)]
    assert V(weighted_projective_data(3, 2)) == [(0, 0, 0), (0, 0, 2), (0, 1, 0), (1, 0, 0)]


def test_volume_denominator_examples():
    assert volume_denominator_check(F(1, 4), 2, 2)
    assert not volume_denominator_check(F(1, 3), 2, 2)
    for p in (2, 3, 5, 7, 11):
        for d in range(1, p):
            for n in (1, 2, 3):
                assert not volume_denominator_check(F(1, p), d, n)
        assert volume_denominator_check(F(1, p), p, 1)


# nested perturbations ----------------------------------------------------------------


def test_nested_bodies_decrease_to_body_of_L():
    L = ToricPolytopeModel(((0, 0), (1, 0), (0, 1)))
    D = ToricPolytopeModel(((1, 0), (2, 0), (0, 2), (0, 1)))
    flag = ToricFlag((0, 1), ((1, 0), (-1, -1)))
    bodies = nested_bodies(L, D, flag, (0, 2), range(1, 7))
    body_L = stabilized_body(L, flag).polytope
    body_D = stabilized_body(D, ToricFlag((0, 2), flag.edge_basis)).polytope
    for m1 in range(1, 7):
        for m2 in range(m1, 7):
            assert bodies[m2].issubset(bodies[m1])
    for m, P in bodies.items():
        assert body_L.issubset(P)
        for h in body_L.halfspaces:
            u = h.normal
            assert P.support(u) - body_L.support(u) == body_D.support(u) / m
