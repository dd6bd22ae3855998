import math
from fractions import Fraction as F

import pytest

from okbody import geometry
from okbody.poly import MPoly
from okbody.sections import (
    CurveDivisor,
    ProjectiveTwist,
    ToricPolytopeModel,
    VeroneseSurface,
    basis,
    predicted_simplex,
    self_intersection,
)
from okbody.valuation import conic_rank
from oracles import pick_area

UNIT_TRIANGLE = ToricPolytopeModel(((0, 0), (1, 0), (0, 1)))
BLP_2H_MINUS_E = ToricPolytopeModel(((1, 0), (2, 0), (0, 2), (0, 1)))

MODELS = [
    ProjectiveTwist(1, 3),
    ProjectiveTwist(2, 1),
    ProjectiveTwist(2, 2),
    ProjectiveTwist(3, 2),
    VeroneseSurface(),
    CurveDivisor(5),
    UNIT_TRIANGLE,
    BLP_2H_MINUS_E,
]


def closed_form_h0(model, m):
    if isinstance(model, ProjectiveTwist):
        return math.comb(m * model.d + model.n, model.n)
    if isinstance(model, VeroneseSurface):
        return math.comb(2 * m + 2, 2)
    if isinstance(model, CurveDivisor):
        return m * model.c + 1
    if model is UNIT_TRIANGLE:
        return math.comb(m + 2, 2)
    # points of 2m * triangle minus the cut corner x + y <= m - 1
    return math.comb(2 * m + 2, 2) - math.comb(m + 1, 2)


def test_basis_examples():
    assert [str(p) for p in basis(ProjectiveTwist(2, 1), 1).elements] == ["u", "v", "w"]
    ver = basis(VeroneseSurface(), 1).elements
    assert len(ver) == 6
    assert {str(p) for p in ver} == {"u^2", "u*v", "v^2", "v*w", "w^2", "u*w"}
    assert len(basis(UNIT_TRIANGLE, 3).elements) == 10


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_basis_size_matches_closed_form(model):
    for m in range(1, 11 if not isinstance(model, ProjectiveTwist) or model.n < 3 else 6):
        assert len(basis(model, m).elements) == closed_form_h0(model, m) == model.h0(m)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_products_land_in_basis(model):
    for m1, m2 in [(1, 1), (1, 2), (2, 2)]:
        target = set(basis(model, m1 + m2).elements)
        for a in basis(model, m1).elements:
            for b in basis(model, m2).elements:
                prod = tuple(x + y for x, y in zip(a, b)) if isinstance(a, tuple) else a * b
                assert prod in target


def test_basis_order_is_fixed():
    els = basis(ProjectiveTwist(2, 1), 2).elements
    exps = [next(iter(p.terms)) for p in els]
    assert exps == sorted(exps, reverse=True)
    pts = basis(UNIT_TRIANGLE, 2).elements
    assert list(pts) == sorted(pts)


def test_self_intersection_examples():
    assert self_intersection(ProjectiveTwist(2, 2)) == 4
    assert self_intersection(CurveDivisor(5)) == 5
    cycle = geometry.hull(BLP_2H_MINUS_E.vertices).cyclic_vertices()
    assert self_intersection(BLP_2H_MINUS_E) == 2 * pick_area(cycle) == 3


def test_predicted_simplex_examples():
    assert [tuple(v) for v in predicted_simplex(ProjectiveTwist(2, 2)).vertices] == [(0, 0), (0, 4), (1, 0)]
    assert [tuple(v) for v in predicted_simplex(CurveDivisor(3)).vertices] == [(0,), (3,)]
    assert [tuple(v) for v in predicted_simplex(ProjectiveTwist(3, 1)).vertices] == [
        (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


@pytest.mark.parametrize("model", [ProjectiveTwist(n, d) for n in (1, 2, 3) for d in (1, 2, 3)] + [CurveDivisor(7), VeroneseSurface()],
                         ids=str)
def test_predicted_simplex_volume(model):
    P = predicted_simplex(model)
    assert math.factorial(model.dim) * geometry.volume(P) == self_intersection(model)


def test_veronese_hyperplane_pullback():
    ver = VeroneseSurface()
    conic = ver.pullback([0, 0, 1, 0, 0, -1])
    assert conic == MPoly.parse("v^2 - u*w", ver.variables)
    assert conic_rank(conic) == 3
    degenerate = ver.pullback([F(2), 0, 5, 0, 0, 0])
    assert conic_rank(degenerate) == 2
