"""Value semigroups of graded section models and the bodies they span.

Level ``m`` of the semigroup is the set of valuation vectors of sections of
``mL``. For polynomial models the sections considered are products

    g_1^k_1 * ... * g_r^k_r * x^b,    sum k_i deg g_i + |b| = m * deg L,

of the flag's divisor polynomials ``g_i`` and monomials. Any section is a
combination of such products with ``sum k_i deg g_i`` fixed; since a
valuation of a sum is the minimum of distinct values, every value of a
section on these models appears in the enumerated set. Values are computed
from the factors by additivity, so each distinct factor is valuated once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import geometry
from .errors import ComputationError, ModelError
from .geometry import QPolytope
from .poly import MPoly, monomials
from .sections import (
    CurveDivisor,
    ProjectiveTwist,
    SectionModel,
    ToricPolytopeModel,
    VeroneseSurface,
)
from .valuation import (
    CoordinateFlag,
    CurveParam,
    FlagChart,
    SurfaceCurveFlag,
    ToricFlag,
    hypersurface_flag,
)

DEFAULT_M_MAX = 12

Vec = tuple[int, ...]


@dataclass(frozen=True)
class ValueSemigroup:
    n: int
    levels: dict[int, frozenset[Vec]]
    bound: int
    witnesses: dict[tuple[int, Vec], str] | None = field(default=None, compare=False)

    def level(self, m: int) -> frozenset[Vec]:
        if not 1 <= m <= self.bound:
            raise ComputationError(f"level {m} outside 1..{self.bound}")
        return self.levels[m]

    def __contains__(self, item: tuple[int, Sequence[int]]) -> bool:
        m, nu = item
        return 1 <= m <= self.bound and tuple(nu) in self.levels[m]

    def closure_violations(self) -> list[tuple[int, Vec, int, Vec]]:
        """Pairs whose sum is missing from the right level (empty for a semigroup)."""
        bad = []
        for m1 in range(1, self.bound + 1):
            for m2 in range(m1, self.bound + 1 - m1):
                target = self.levels[m1 + m2]
                for a in self.levels[m1]:
                    for b in self.levels[m2]:
                        if tuple(x + y for x, y in zip(a, b)) not in target:
                            bad.append((m1, a, m2, b))
        return bad

    def without(self, m: int, nu: Sequence[int]) -> "ValueSemigroup":
        """Copy with one element removed; used to build negative controls."""
        levels = dict(self.levels)
        levels[m] = levels[m] - {tuple(nu)}
        return ValueSemigroup(self.n, levels, self.bound)


class GenerationReport(NamedTuple):
    generated_up_to: int
    witnesses_missing: list[tuple[int, Vec]]
    vertex_hit: bool


class StabilizedBody(NamedTuple):
    polytope: QPolytope
    stabilized: bool
    at: int


# default flags ---------------------------------------------------------------


def conic_flag() -> SurfaceCurveFlag:
    """The conic ``v^2 = uw`` with parametrization ``(s^2, st, t^2)`` at ``t = 0``."""
    uvw = VeroneseSurface.variables
    return SurfaceCurveFlag(MPoly.parse("v^2 - u*w", uvw), CurveParam(("1", "t", "t^2")))


def default_flag(model: SectionModel) -> FlagChart:
    if isinstance(model, ProjectiveTwist):
        return hypersurface_flag(model.variables, model.d)
    if isinstance(model, VeroneseSurface):
        return conic_flag()
    if isinstance(model, CurveDivisor):
        return CoordinateFlag(("t",))
    raise ModelError("toric models need an explicit flag")


# level enumeration -----------------------------------------------------------


def _check_flag(model: SectionModel, flag: FlagChart) -> None:
    if flag.rank != model.dim:
        raise ModelError(f"flag/model dimension mismatch: flag rank {flag.rank}, model dimension {model.dim}")
    if isinstance(model, ToricPolytopeModel) != isinstance(flag, ToricFlag):
        raise ModelError("toric flags go with toric models only")


def _add(a: Sequence[int], b: Sequence[int], k: int = 1) -> Vec:
    return tuple(x + k * y for x, y in zip(a, b))


def _render(kappa: Sequence[int], b: Sequence[int], variables: Sequence[str]) -> str:
    parts = [f"g{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(kappa) if k]
    parts += [v + (f"^{e}" if e > 1 else "") for v, e in zip(variables, b) if e]
    return "*".join(parts) or "1"


class _PolynomialLevels:
    """Level sets for models whose sections are forms in ``variables``."""

    def __init__(self, variables: Sequence[str], degree: int, flag: FlagChart):
        self.variables = tuple(variables)
        self.degree = degree
        self.flag = flag
        self.var_nu = [flag.value(MPoly.var(v, self.variables)) for v in self.variables]
        self.divisors = tuple(flag.divisors)
        self.div_deg = [g.degree() for g in self.divisors]
        self.div_nu = [flag.value(g) for g in self.divisors]
        zero = (0,) * flag.rank
        self._mono: dict[Vec, Vec] = {(0,) * len(self.variables): zero}

    def _monomial_nu(self, b: Vec) -> Vec:
        # built from the value of the same exponent with one factor fewer
        nu = self._mono.get(b)
        if nu is None:
            j = next(i for i, e in enumerate(b) if e)
            prev = b[:j] + (b[j] - 1,) + b[j + 1 :]
            nu = _add(self._monomial_nu(prev), self.var_nu[j])
            self._mono[b] = nu
        return nu

    def level(self, m: int, witnesses: dict | None) -> frozenset[Vec]:
        total = m * self.degree
        out: set[Vec] = set()
        ranges = [range(total // dg + 1) for dg in self.div_deg]
        for kappa in itertools.product(*ranges):
            used = sum(k * dg for k, dg in zip(kappa, self.div_deg))
            if used > total:
                continue
            base = (0,) * self.flag.rank
            for k, nu in zip(kappa, self.div_nu):
                base = _add(base, nu, k)
            for b in monomials(len(self.variables), total - used):
                nu = _add(base, self._monomial_nu(b))
                if nu not in out:
                    out.add(nu)
                    if witnesses is not None:
                        witnesses[(m, nu)] = _render(kappa, b, self.variables)
        return frozenset(out)


def _level_source(model: SectionModel, flag: FlagChart):
    """Return a callable ``(m, witnesses) -> frozenset`` producing level ``m``."""
    if isinstance(model, ToricPolytopeModel):

        def toric(m, witnesses):
            out = set()
            for p in model.basis(m).elements:
                nu = flag.value(p, m)
                if witnesses is not None and nu not in out:
                    witnesses[(m, nu)] = str(p)
                out.add(nu)
            return frozenset(out)

        return toric
    if isinstance(model, CurveDivisor):

        def curve(m, witnesses):
            out = set()
            for s in model.basis(m).elements:
                nu = flag.value(s)
                if witnesses is not None and nu not in out:
                    witnesses[(m, nu)] = str(s)
                out.add(nu)
            return frozenset(out)

        return curve
    return _PolynomialLevels(model.variables, model.section_degree, flag).level


def build(model: SectionModel, flag: FlagChart | None = None, M: int = 1, witnesses: bool = False) -> ValueSemigroup:
    """Valuation vectors of sections of ``mL`` for ``m = 1..M``."""
    if M < 1:
        raise ComputationError("bound M must be positive")
    flag = default_flag(model) if flag is None else flag
    _check_flag(model, flag)
    source = _level_source(model, flag)
    wit: dict | None = {} if witnesses else None
    levels = {m: source(m, wit) for m in range(1, M + 1)}
    return ValueSemigroup(flag.rank, levels, M, wit)


# bodies ----------------------------------------------------------------------


def _scaled(level: Iterable[Vec], m: int) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(x, m) for x in nu) for nu in level]


def body_estimate(gamma: ValueSemigroup) -> QPolytope:
    """Hull of ``nu / m`` over all levels up to ``gamma.bound``."""
    pts: list = []
    for m in range(1, gamma.bound + 1):
        pts.extend(_scaled(gamma.levels[m], m))
    return geometry.hull(pts)


def stabilized_body(model: SectionModel, flag: FlagChart | None = None, M_max: int = DEFAULT_M_MAX) -> StabilizedBody:
    """Grow the hull level by level until two consecutive estimates agree."""
    if M_max < 2:
        raise ComputationError("M_max must be at least 2")
    flag = default_flag(model) if flag is None else flag
    _check_flag(model, flag)
    source = _level_source(model, flag)
    body = geometry.hull(_scaled(source(1, None), 1))
    for m in range(2, M_max + 1):
        grown = geometry.hull(list(body.vertices) + _scaled(source(m, None), m))
        if grown == body:
            return StabilizedBody(grown, True, m)
        body = grown
    return StabilizedBody(body, False, M_max)


# finite generation -----------------------------------------------------------


def vertex_hit_check(gamma: ValueSemigroup, body: QPolytope) -> bool:
    """Every vertex of ``body`` is the value of a degree-one section."""
    level1 = gamma.levels[1]
    for v in body.vertices:
        if any(x.denominator != 1 for x in v):
            return False
        if tuple(int(x) for x in v) not in level1:
            return False
    return True


def is_generated_up_to(gamma: ValueSemigroup, gens: Iterable[tuple[int, Sequence[int]]], M: int | None = None) -> GenerationReport:
    """Check degree by degree which elements are sums of generators.

    An element of level ``m`` is reachable if it is a generator, or if
    subtracting some generator of smaller degree leaves a reachable element.
    """
    M = gamma.bound if M is None else M
    if not 1 <= M <= gamma.bound:
        raise ComputationError(f"M must lie in 1..{gamma.bound}")
    gens = sorted({(int(m), tuple(int(x) for x in nu)) for m, nu in gens})
    for g in gens:
        if g not in gamma:
            raise ComputationError(f"generator {g} is not in the semigroup")
    gen_set = set(gens)
    reachable: dict[int, set[Vec]] = {}
    missing: list[tuple[int, Vec]] = []
    for m in range(1, M + 1):
        reach = set()
        for nu in sorted(gamma.levels[m]):
            if (m, nu) in gen_set or any(
                mg < m and tuple(a - b for a, b in zip(nu, g)) in reachable[m - mg] for mg, g in gens
            ):
                reach.add(nu)
            else:
                missing.append((m, nu))
        reachable[m] = reach
    upto = M if not missing else missing[0][0] - 1
    hit = vertex_hit_check(gamma, body_estimate(gamma))
    return GenerationReport(upto, missing, hit)


def weighted_projective_data(n: int, c: int) -> QPolytope:
    """Simplex ``0, e_1, ..., e_(n-1), c e_n`` of the weighted projective
    space ``P(1, ..., 1, c)``."""
    if n < 1 or c < 1:
        raise ComputationError("need n >= 1 and c >= 1")
    return geometry.simplex(n, c)


def volume_denominator_check(vol, d: int, n: int) -> bool:
    """Whether the reduced denominator of ``vol`` divides ``d^n``."""
    vol = Fraction(vol)
    if vol <= 0:
        raise ComputationError("volume must be positive")
    return d**n % vol.denominator == 0


# nested perturbations --------------------------------------------------------


def nested_bodies(
    L: ToricPolytopeModel,
    D: ToricPolytopeModel,
    flag_L: ToricFlag,
    vertex_D: Sequence[int],
    ms: Iterable[int],
) -> dict[int, QPolytope]:
    """Bodies of ``(1/m) D + L`` on a toric model, for each ``m`` in ``ms``.

    ``(1/m) D + L`` is realized as ``1/m`` times the lattice polytope
    ``m P_L + P_D``; its flag sits at ``m * vertex_L + vertex_D`` with the
    same edge basis, so ``vertex_D`` must be the vertex of ``P_D`` on the
    same facets as the flag vertex of ``P_L``.
    """
    out = {}
    for m in ms:
        if m < 1:
            raise ComputationError("m must be positive")
        big = geometry.minkowski_sum(geometry.affine_image(L.polytope, m), D.polytope)
        model = ToricPolytopeModel(tuple(tuple(int(x) for x in v) for v in big.vertices))
        vertex = tuple(m * a + b for a, b in zip(flag_L.vertex, vertex_D))
        body = stabilized_body(model, ToricFlag(vertex, flag_L.edge_basis), 4).polytope
        out[m] = geometry.affine_image(body, Fraction(1, m))
    return out
