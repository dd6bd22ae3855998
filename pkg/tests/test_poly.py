import random
from fractions import Fraction as F

import pytest
import sympy as sp

from okbody.poly import MPoly, monomials

UVW = ("u", "v", "w")


def to_sympy(p: MPoly):
    syms = sp.symbols(p.variables)
    return sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * sp.prod([s**k for s, k in zip(syms, e)])
                       for e, c in p.terms.items()) or 0, *syms)


def random_poly(rng, variables, terms=4, deg=3):
    return MPoly(variables, {tuple(rng.randint(0, deg) for _ in variables): F(rng.randint(-5, 5), rng.randint(1, 3))
                             for _ in range(terms)})


def test_parse_and_print():
    q = MPoly.parse("v^2 - u*w", UVW)
    assert q.terms == {(0, 2, 0): 1, (1, 0, 1): -1}
    assert str(q) == "-u*w + v^2" or str(q) == "v^2 - u*w"
    assert MPoly.parse("(u+v)**2/2", UVW) == MPoly(UVW, {(2, 0, 0): F(1, 2), (1, 1, 0): 1, (0, 2, 0): F(1, 2)})
    with pytest.raises(ValueError):
        MPoly.parse("u/v", UVW)
    with pytest.raises(ValueError):
        MPoly.parse("x + 1", UVW)


def test_zero_coefficients_dropped():
    p = MPoly(UVW, {(1, 0, 0): 1}) - MPoly(UVW, {(1, 0, 0): 1})
    assert p.is_zero() and p.terms == {}


@pytest.mark.parametrize("seed", range(10))
def test_ring_ops_match_sympy(seed):
    rng = random.Random(seed)
    f, g = random_poly(rng, UVW), random_poly(rng, UVW)
    assert to_sympy(f * g) == to_sympy(f) * to_sympy(g)
    assert to_sympy(f + g) == to_sympy(f) + to_sympy(g)
    assert to_sympy(f**3) == to_sympy(f) ** 3


@pytest.mark.parametrize("seed", range(10))
def test_exact_div_matches_sympy(seed):
    rng = random.Random(100 + seed)
    g = random_poly(rng, UVW, terms=3, deg=2)
    if g.degree() < 1:
        g = g + MPoly.var("u", UVW)
    h = random_poly(rng, UVW)
    if h.is_zero():
        h = MPoly.const(1, UVW)
    assert (h * g).exact_div(g) == h
    r = h * g + MPoly.const(1, UVW)
    _, rem = sp.div(to_sympy(r), to_sympy(g))
    assert (r.exact_div(g) is None) == (rem != 0)


def test_compose_and_evaluate():
    t = ("t",)
    f = MPoly.parse("w^2 + u*v", UVW)
    images = [MPoly.parse(s, t) for s in ("1", "t", "t^2")]
    assert f.compose(images) == MPoly.parse("t^4 + t", t)
    assert f.evaluate({"u": 2, "v": 3, "w": F(1, 2)}) == F(1, 4) + 6


def test_monomials_order_and_count():
    mons = list(monomials(3, 2))
    assert mons[0] == (2, 0, 0) and mons[-1] == (0, 0, 2)
    assert mons == sorted(mons, reverse=True)
    assert len(list(monomials(4, 5))) == 56
