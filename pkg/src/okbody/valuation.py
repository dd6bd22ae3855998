"""Flag valuations of explicit polynomial sections.

Three kinds of flags are supported:

* :class:`CoordinateFlag` -- ``Y_k = {z_1 = ... = z_k = 0}`` in some affine
  chart, possibly after a polynomial change of coordinates. The valuation
  is the lexicographically smallest exponent vector.
* :class:`SurfaceCurveFlag` -- on a surface, an irreducible curve given by
  an equation together with a polynomial parametrization, and a point on it.
* :class:`ToricFlag` -- a torus-invariant flag of a toric variety, acting
  on lattice points by a unimodular affine map.

Irreducibility of flag curves is the model author's responsibility, except
for conics, whose rank is checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import ComputationError, ModelError
from .poly import MPoly

T = ("t",)


def divisor_order(f: MPoly, g: MPoly) -> int:
    """Largest ``k`` with ``g**k`` dividing ``f``."""
    if f.is_zero():
        raise ComputationError("zero section")
    if g.degree() < 1:
        raise ComputationError("divisor polynomial must be nonconstant")
    k = 0
    while True:
        q = f.exact_div(g)
        if q is None:
            return k
        f = q
        k += 1


def coord_flag_valuation(f: MPoly, n: int) -> tuple[int, ...]:
    """Successive orders of vanishing along ``x_1 = 0``, then ``x_2 = 0`` on it, ...

    The first ``n`` variables of ``f`` are the flag coordinates.
    """
    if f.is_zero():
        raise ComputationError("zero section")
    if n > f.nvars:
        raise ComputationError("flag longer than the number of variables")
    surviving = list(f.terms)
    nu = []
    for k in range(n):
        order = min(e[k] for e in surviving)
        nu.append(order)
        # divide by x_k^order and restrict to x_k = 0
        surviving = [e for e in surviving if e[k] == order]
    return tuple(nu)


def _order_at(p: MPoly, t0: Fraction) -> int:
    """Order of vanishing of a univariate polynomial at ``t0``."""
    if p.is_zero():
        raise ComputationError("section vanishes on flag curve")
    if t0 != 0:
        p = p.compose([MPoly(T, {(1,): 1, (0,): t0})])
    return min(e[0] for e in p.terms)


@dataclass(frozen=True)
class CurveParam:
    """Polynomial parametrization ``t -> [c_0(t) : ... : c_r(t)]`` of a
    rational curve, marking the point ``t = base_point``.

    Components are univariate polynomials in ``t`` (the chart ``s = 1`` of a
    binary-form parametrization). A common factor ``(t - base_point)^k`` is
    cleared on construction so that the marked point is well defined.
    """

    components: tuple[MPoly, ...]
    base_point: Fraction = Fraction(0)

    def __post_init__(self):
        comps = tuple(
            c if isinstance(c, MPoly) else MPoly.parse(str(c), T) for c in self.components
        )
        t0 = Fraction(self.base_point)
        if any(c.variables != T for c in comps):
            raise ModelError("parametrization components must be polynomials in 't'")
        nonzero = [c for c in comps if not c.is_zero()]
        if not nonzero:
            raise ModelError("parametrization is identically zero")
        common = min(_order_at(c, t0) for c in nonzero)
        if common:
            factor = MPoly(T, {(1,): 1, (0,): -t0}) ** common
            comps = tuple(c.exact_div(factor) if not c.is_zero() else c for c in comps)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "base_point", t0)

    def pullback(self, f: MPoly) -> MPoly:
        if f.nvars != len(self.components):
            raise ComputationError("parametrization and section have different ambient coordinates")
        return f.compose(self.components)

    def point(self) -> tuple[Fraction, ...]:
        return tuple(c.evaluate({"t": self.base_point}) for c in self.components)

    def is_primitive(self) -> bool:
        """Whether the branch at the base point is traced once.

        The affine coordinates ``c_i / c_j`` (with ``c_j`` nonzero at the
        point) are expanded as power series in ``t - base_point``; the branch
        is primitive iff the exponents occurring have gcd 1. Expanding to
        order ``2D + 1`` (``D`` the largest component degree) decides this,
        since two rational functions of degree at most ``D`` agreeing to that
        order are equal.
        """
        pt = self.point()
        j = next(i for i, x in enumerate(pt) if x != 0)
        shift = [MPoly(T, {(1,): 1, (0,): self.base_point})]
        comps = [c.compose(shift) for c in self.components]
        order = 2 * max(c.degree() for c in comps) + 1
        den = [comps[j].coefficient((k,)) for k in range(order + 1)]
        g = 0
        for i, c in enumerate(comps):
            if i == j:
                continue
            num = [c.coefficient((k,)) for k in range(order + 1)]
            series: list[Fraction] = []
            for k in range(order + 1):
                acc = num[k] - sum(series[r] * den[k - r] for r in range(k))
                series.append(acc / den[0])
            for k in range(1, order + 1):
                if series[k]:
                    g = math.gcd(g, k)
        return g == 1


def restriction_order(f: MPoly, param: CurveParam) -> int:
    """Order at the marked point of ``f`` restricted to the parametrized curve."""
    return _order_at(param.pullback(f), param.base_point)


def local_multiplicity(s: MPoly, param: CurveParam) -> int:
    """Intersection multiplicity at the marked point of ``s`` with a unibranch
    parametrized curve, possibly singular there.

    For a primitive parametrization of a single branch this is the order of
    the pullback. Multibranch points are not supported.
    """
    if not param.is_primitive():
        raise ComputationError("parametrization is not primitive at the base point")
    return _order_at(param.pullback(s), param.base_point)


def conic_rank(q: MPoly) -> int:
    """Rank of the symmetric Gram matrix of a ternary quadratic form."""
    if q.nvars != 3 or q.is_zero() or q.degree() != 2 or not q.is_homogeneous():
        raise ComputationError("conic_rank needs a nonzero quadratic form in 3 variables")
    gram = [[Fraction(0)] * 3 for _ in range(3)]
    for exp, c in q.terms.items():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        i, j = idx
        if i == j:
            gram[i][i] += c
        else:
            gram[i][j] += c / 2
            gram[j][i] += c / 2
    return linalg.rank(gram)


def _is_ternary_quadric(g: MPoly) -> bool:
    return g.nvars == 3 and g.degree() == 2 and g.is_homogeneous()


@dataclass(frozen=True)
class CoordinateFlag:
    """Coordinate flag ``Y_k = {z_1 = ... = z_k = 0}``.

    ``coords`` names the flag coordinates ``z_1..z_n``. ``chart`` maps every
    ambient variable to a polynomial in ``coords`` (e.g. setting the
    homogenizing variable to 1, or a triangular change of coordinates);
    without a chart, sections must already be polynomials in ``coords``.
    ``divisors`` lists ambient sections whose zero loci are the hypersurfaces
    cutting out the flag, used to enumerate sections with positive orders.
    """

    coords: tuple[str, ...]
    chart: Mapping[str, MPoly] | None = field(default=None, hash=False)
    divisors: tuple[MPoly, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.coords)

    def value(self, f: MPoly) -> tuple[int, ...]:
        if self.chart is not None:
            f = f.compose(self.chart)
        elif f.variables != self.coords:
            raise ComputationError("section variables do not match the flag coordinates")
        return coord_flag_valuation(f, self.rank)

    @classmethod
    def affine(cls, variables: Sequence[str], homogenizing: str | None = None) -> "CoordinateFlag":
        """Coordinate flag in the chart ``homogenizing = 1``, flag order
        following ``variables``."""
        variables = tuple(variables)
        coords = tuple(v for v in variables if v != homogenizing)
        chart = {v: MPoly.var(v, coords) if v != homogenizing else MPoly.const(1, coords) for v in variables}
        return cls(coords, chart)


@dataclass(frozen=True)
class SurfaceCurveFlag:
    """Flag ``(C, x)`` on a surface: curve ``C = {divisor = 0}`` and the point
    ``x`` marked on the parametrization of ``C``."""

    divisor: MPoly
    param: CurveParam

    def __post_init__(self):
        if self.divisor.degree() < 1:
            raise ModelError("flag divisor must be nonconstant")
        if _is_ternary_quadric(self.divisor) and conic_rank(self.divisor) < 3:
            raise ModelError("flag curve is a degenerate conic (rank < 3)")
        if not self.param.pullback(self.divisor).is_zero():
            raise ModelError("parametrization does not lie on the flag curve")

    @property
    def rank(self) -> int:
        return 2

    @property
    def divisors(self) -> tuple[MPoly, ...]:
        return (self.divisor,)

    def value(self, f: MPoly) -> tuple[int, ...]:
        return surface_flag_valuation(f, self)


def surface_flag_valuation(f: MPoly, flag: SurfaceCurveFlag) -> tuple[int, int]:
    k = divisor_order(f, flag.divisor)
    rest = f
    for _ in range(k):
        rest = rest.exact_div(flag.divisor)
    return k, restriction_order(rest, flag.param)


@dataclass(frozen=True)
class ToricFlag:
    """Torus-invariant flag at a vertex of a lattice polytope.

    Rows of ``edge_basis`` are the inner facet normals at ``vertex``, first
    row for ``Y_1``; the valuation of a lattice point ``p`` of ``mP`` is
    ``edge_basis . (p - m * vertex)``.
    """

    vertex: tuple[int, ...]
    edge_basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in row) for row in self.edge_basis)
        object.__setattr__(self, "edge_basis", basis)
        object.__setattr__(self, "vertex", tuple(int(x) for x in self.vertex))
        n = len(self.vertex)
        if len(basis) != n or any(len(row) != n for row in basis):
            raise ModelError("edge basis must be a square matrix matching the vertex")
        if abs(linalg.det(basis)) != 1:
            raise ModelError("edge basis must be unimodular")

    @property
    def rank(self) -> int:
        return len(self.vertex)

    def value(self, point: Sequence[int], m: int = 1) -> tuple[int, ...]:
        return toric_flag_valuation(point, self, m)


def toric_flag_valuation(point: Sequence[int], flag: ToricFlag, m: int = 1) -> tuple[int, ...]:
    diff = [p - m * v for p, v in zip(point, flag.vertex)]
    nu = tuple(sum(b * d for b, d in zip(row, diff)) for row in flag.edge_basis)
    if any(x < 0 for x in nu):
        raise ComputationError("flag vertex/basis inconsistent with polytope")
    return nu


FlagChart = CoordinateFlag | SurfaceCurveFlag | ToricFlag


def hypersurface_flag(variables: Sequence[str], d: int) -> CoordinateFlag:
    """Flag on ``P^n`` cut out by members of ``|O(d)|``.

    With homogeneous coordinates ``x_0..x_n`` the divisors are
    ``E_i = {x_i x_0^(d-1) = x_(i+1)^d}`` for ``i < n``; in the chart
    ``x_0 = 1`` the functions ``z_i = x_i - x_(i+1)^d`` (and ``z_n = x_n``)
    form a triangular coordinate system in which ``E_1 n ... n E_k`` is the
    coordinate subspace ``z_1 = ... = z_k = 0``. Each intersection is
    irreducible and smooth at the origin, so the flag satisfies the
    hypotheses under which the body is the simplex with vertices
    ``0, e_1, ..., e_(n-1), d^n e_n``.
    """
    variables = tuple(variables)
    n = len(variables) - 1
    coords = tuple(f"z{i}" for i in range(1, n + 1))
    chart: dict[str, MPoly] = {variables[0]: MPoly.const(1, coords)}
    image = MPoly.var(coords[-1], coords)
    chart[variables[n]] = image
    for i in range(n - 1, 0, -1):
        image = MPoly.var(coords[i - 1], coords) + image**d
        chart[variables[i]] = image
    x = [MPoly.var(v, variables) for v in variables]
    divisors = tuple(x[i] * x[0] ** (d - 1) - x[i + 1] ** d for i in range(1, n))
    return CoordinateFlag(coords, chart, divisors)
