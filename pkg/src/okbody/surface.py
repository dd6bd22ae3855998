"""Intersection theory on a Picard lattice and Okounkov polygons of surfaces.

A :class:`SurfaceModel` is a Gram matrix plus a list of declared
irreducible curves. Every statement about nefness or pseudo-effectivity is
made relative to that list: a divisor is treated as nef when it meets each
declared curve nonnegatively, and the negative part of a Zariski
decomposition is supported on declared curves only. If the list omits a
negative curve that matters, results are wrong without warning.

For a big divisor ``D`` and a flag curve ``C`` the polygon is

    { a <= t <= mu,  alpha(t) <= y <= beta(t) },

where ``D - tC = P_t + N_t``, ``a`` is the coefficient of ``C`` in
``N_0``, ``alpha(t)`` is the order at the flag point of ``N_t`` restricted
to ``C``, and ``beta(t) = alpha(t) + (P_t . C)``. Along the ray the
decomposition is piecewise affine in ``t``; breakpoints are found exactly.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import geometry, linalg
from .errors import ComputationError, ModelError, NotPseudoEffectiveError
from .geometry import QPolytope

DEFAULT_CHAMBER_CAP = 64


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __mul__(self, k) -> "DivisorClass":
        k = Fraction(k)
        return DivisorClass(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)?")


class SurfaceModel:
    """Picard lattice with declared irreducible curves.

    ``curves`` maps curve names to class coefficient vectors; insertion order
    only affects presentation, never results.
    """

    def __init__(self, class_names: Sequence[str], gram: Sequence[Sequence], curves: Mapping[str, Sequence] | Iterable[tuple[str, Sequence]]):
        self.class_names = tuple(class_names)
        r = len(self.class_names)
        if r == 0:
            raise ModelError("surface model needs at least one class", "model.classes")
        if len(set(self.class_names)) != r:
            raise ModelError("duplicate class names", "model.classes")
        if len(gram) != r:
            raise ModelError(f"gram must have {r} rows", "model.gram")
        rows = []
        for i, row in enumerate(gram):
            if len(row) != r:
                raise ModelError(f"gram row has {len(row)} entries, expected {r}", f"model.gram[{i}]")
            rows.append(tuple(Fraction(x) for x in row))
        for i in range(r):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ModelError(f"gram is not symmetric at ({i}, {j})", f"model.gram[{i}]")
        self.gram = tuple(rows)
        items = curves.items() if isinstance(curves, Mapping) else curves
        self.curves: dict[str, DivisorClass] = {}
        for name, vec in items:
            if name in self.curves:
                raise ModelError(f"duplicate curve {name!r}", f"model.curves.{name}")
            d = vec if isinstance(vec, DivisorClass) else self.divisor(vec, path=f"model.curves.{name}")
            if len(d) != r:
                raise ModelError(f"curve {name!r} has the wrong length", f"model.curves.{name}")
            self.curves[name] = d
        squares = [rows[i][i] for i in range(r)] + [self.intersect(c, c) for c in self.curves.values()]
        if not any(s > 0 for s in squares):
            warnings.warn("no class or curve of positive self-intersection; the lattice may not be a Picard lattice")

    @property
    def rank(self) -> int:
        return len(self.class_names)

    def divisor(self, spec, path: str = "divisor") -> DivisorClass:
        """Class from a coefficient list, a ``{name: coeff}`` mapping, or an
        expression such as ``"2H - E1 - 1/2 E2"``."""
        if isinstance(spec, DivisorClass):
            return spec
        if isinstance(spec, str):
            return self._parse(spec, path)
        if isinstance(spec, Mapping):
            coeffs = [Fraction(0)] * self.rank
            for name, c in spec.items():
                if name not in self.class_names:
                    raise ModelError(f"unknown class {name!r}", f"{path}.{name}")
                coeffs[self.class_names.index(name)] += Fraction(c)
            return DivisorClass(tuple(coeffs))
        try:
            coeffs = tuple(Fraction(c) for c in spec)
        except (TypeError, ValueError) as exc:
            raise ModelError(f"bad divisor coefficients: {exc}", path) from exc
        if len(coeffs) != self.rank:
            raise ModelError(f"divisor needs {self.rank} coefficients", path)
        return DivisorClass(coeffs)

    def _parse(self, text: str, path: str) -> DivisorClass:
        coeffs = [Fraction(0)] * self.rank
        pos, s = 0, text.strip()
        if not s:
            raise ModelError("empty divisor expression", path)
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ModelError(f"cannot parse divisor {text!r}", path)
            sign = -1 if m.group(1) == "-" else 1
            c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            name = m.group(3)
            if name is None:
                raise ModelError(f"constant term in divisor {text!r}", path)
            if name not in self.class_names:
                raise ModelError(f"unknown class {name!r}", path)
            coeffs[self.class_names.index(name)] += sign * c
            pos = m.end()
        return DivisorClass(tuple(coeffs))

    def intersect(self, d1: DivisorClass, d2: DivisorClass) -> Fraction:
        return linalg.bilinear(d1.coeffs, self.gram, d2.coeffs)

    def curve_named(self, cls: DivisorClass) -> str | None:
        """Name of the declared curve with class ``cls``, if any."""
        for name, c in self.curves.items():
            if c == cls:
                return name
        return None

    def __repr__(self):
        return f"SurfaceModel(classes={self.class_names}, curves={list(self.curves)})"


def intersect(model: SurfaceModel, d1: DivisorClass, d2: DivisorClass) -> Fraction:
    return model.intersect(d1, d2)


@dataclass(frozen=True)
class ZariskiDecomp:
    P: DivisorClass
    N: dict[str, Fraction]
    support: tuple[str, ...]

    def negative_part(self, model: SurfaceModel) -> DivisorClass:
        out = DivisorClass((0,) * model.rank)
        for name, a in self.N.items():
            out = out + model.curves[name] * a
        return out


# Fujita's algorithm over Q[eps]/(eps^2) ----------------------------------------
#
# A divisor is a pair (D0, D1) standing for D0 + eps*D1 with eps a positive
# infinitesimal; numbers are pairs compared lexicographically. With D1 = 0
# this is the ordinary algorithm.


def _lex_neg(x: tuple[Fraction, ...]) -> bool:
    for c in x:
        if c:
            return c < 0
    return False


def _fujita(model: SurfaceModel, D0: DivisorClass, D1: DivisorClass):
    names = list(model.curves)
    curves = model.curves

    def dot(name):
        c = curves[name]
        return (model.intersect(D0, c), model.intersect(D1, c))

    support = sorted(n for n in names if _lex_neg(dot(n)))
    while True:
        if support:
            G = [[model.intersect(curves[a], curves[b]) for b in support] for a in support]
            if not linalg.is_negative_definite(G):
                raise NotPseudoEffectiveError(
                    "not pseudo-effective relative to declared curves (support "
                    f"{', '.join(support)} is not negative definite)"
                )
            r0 = [model.intersect(D0, curves[a]) for a in support]
            r1 = [model.intersect(D1, curves[a]) for a in support]
            a0 = linalg.solve(G, r0)
            a1 = linalg.solve(G, r1)
        else:
            a0, a1 = [], []
        for name, x, y in zip(support, a0, a1):
            if _lex_neg((x, y)):
                raise NotPseudoEffectiveError(
                    f"not pseudo-effective relative to declared curves (negative coefficient on {name})"
                )
        P0, P1 = D0, D1
        for name, x, y in zip(support, a0, a1):
            P0 = P0 - curves[name] * x
            P1 = P1 - curves[name] * y
        grow = sorted(
            n for n in names if n not in support
            and _lex_neg((model.intersect(P0, curves[n]), model.intersect(P1, curves[n])))
        )
        if not grow:
            break
        support = sorted(support + grow)
    sq = (model.intersect(P0, P0), 2 * model.intersect(P0, P1), model.intersect(P1, P1))
    if _lex_neg(sq):
        raise NotPseudoEffectiveError("not pseudo-effective relative to declared curves (P.P < 0)")
    return P0, P1, dict(zip(support, a0)), dict(zip(support, a1))


def zariski(model: SurfaceModel, D: DivisorClass) -> ZariskiDecomp:
    """Zariski decomposition ``D = P + N`` relative to the declared curves."""
    D = model.divisor(D)
    zero = DivisorClass((0,) * model.rank)
    P, _, coeffs, _ = _fujita(model, D, zero)
    N = {name: a for name, a in sorted(coeffs.items()) if a}
    return ZariskiDecomp(P, N, tuple(sorted(N)))


def volume_surface(model: SurfaceModel, D: DivisorClass) -> Fraction:
    z = zariski(model, D)
    return model.intersect(z.P, z.P)


# chamber scan ----------------------------------------------------------------


Affine = tuple[Fraction, Fraction]  # c0 + c1 * t


def _ev(f: Affine, t: Fraction) -> Fraction:
    return f[0] + f[1] * t


@dataclass(frozen=True)
class Chamber:
    start: Fraction
    end: Fraction
    support: tuple[str, ...]
    coefficients: dict[str, Affine]
    beta: Affine  # (P_t . C) on this chamber

    def coefficient(self, name: str, t) -> Fraction:
        f = self.coefficients.get(name)
        return _ev(f, Fraction(t)) if f else Fraction(0)


@dataclass(frozen=True)
class ChamberScan:
    chambers: tuple[Chamber, ...]

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(c.start for c in self.chambers) + (self.mu,)

    @property
    def mu(self) -> Fraction:
        return self.chambers[-1].end

    def chamber_at(self, t) -> Chamber:
        t = Fraction(t)
        for c in self.chambers:
            if c.start <= t <= c.end:
                return c
        raise ComputationError(f"t = {t} outside [0, mu]")

    def beta(self, t) -> Fraction:
        return _ev(self.chamber_at(t).beta, Fraction(t))

    def coefficient(self, name: str, t) -> Fraction:
        return self.chamber_at(t).coefficient(name, t)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _first_root(q: tuple[Fraction, Fraction, Fraction], lo: Fraction, hi: Fraction | None) -> Fraction | None:
    """Smallest root of ``q0 + q1 t + q2 t^2`` in ``(lo, hi]`` (``hi=None``: unbounded).

    Raises if that root is irrational.
    """
    q0, q1, q2 = q
    if q2 == 0:
        if q1 == 0:
            return None
        roots = [-q0 / q1]
    else:
        disc = q1 * q1 - 4 * q2 * q0
        if disc < 0:
            return None
        s = _rational_sqrt(disc)
        if s is None:
            # decide whether an irrational root falls in the window
            def val(t):
                return q0 + q1 * t + q2 * t * t

            vertex = -q1 / (2 * q2)
            inside = False
            if hi is None:
                inside = vertex > lo or val(lo) * q2 < 0
            else:
                if val(lo) * val(hi) < 0:
                    inside = True
                elif lo < vertex < hi and val(vertex) * val(lo) < 0:
                    inside = True
            if inside:
                raise ComputationError("pseudo-effective threshold is irrational")
            return None
        roots = sorted({(-q1 - s) / (2 * q2), (-q1 + s) / (2 * q2)})
    for r in roots:
        if r > lo and (hi is None or r <= hi):
            return r
    return None


def _is_big(model: SurfaceModel, D: DivisorClass) -> None:
    z = zariski(model, D)
    if model.intersect(z.P, z.P) <= 0:
        raise ComputationError("divisor is not big")


def chamber_scan(model: SurfaceModel, D: DivisorClass, C_flag: DivisorClass, cap: int = DEFAULT_CHAMBER_CAP) -> ChamberScan:
    """Chambers of ``D - tC`` for ``0 <= t <= mu``.

    In each chamber the support of ``N_t`` is the one valid just to the
    right of its start, found by running the decomposition at ``t + eps``.
    The chamber ends at the first ``t`` where a coefficient reaches zero,
    a curve outside the support starts to meet ``P_t`` negatively, or
    ``P_t^2`` vanishes; the last of these is ``mu``.
    """
    D = model.divisor(D)
    C = model.divisor(C_flag)
    _is_big(model, D)
    curves = model.curves
    chambers: list[Chamber] = []
    t0 = Fraction(0)
    for _ in range(cap):
        start = D - C * t0
        try:
            _, _, right, _ = _fujita(model, start, -C)
        except NotPseudoEffectiveError:
            if not chambers:
                raise NotPseudoEffectiveError("D - tC leaves the pseudo-effective cone immediately")
            break
        support = sorted(right)
        if support:
            G = [[model.intersect(curves[a], curves[b]) for b in support] for a in support]
            c0 = linalg.solve(G, [model.intersect(D, curves[a]) for a in support])
            c1 = linalg.solve(G, [-model.intersect(C, curves[a]) for a in support])
        else:
            c0, c1 = [], []
        P0, P1 = D, -C
        for name, x, y in zip(support, c0, c1):
            P0 = P0 - curves[name] * x
            P1 = P1 - curves[name] * y
        events = []
        for x, y in zip(c0, c1):
            if y < 0:
                events.append(-x / y)
        for name, cv in curves.items():
            if name in support:
                continue
            f0, f1 = model.intersect(P0, cv), model.intersect(P1, cv)
            if f1 < 0:
                events.append(-f0 / f1)
        events = [e for e in events if e > t0]
        t_lin = min(events) if events else None
        q = (model.intersect(P0, P0), 2 * model.intersect(P0, P1), model.intersect(P1, P1))
        root = _first_root(q, t0, t_lin)
        end = root if root is not None else t_lin
        if end is None:
            raise ComputationError("D - tC stays pseudo-effective for all t; is the flag class effective?")
        coeffs = {name: (x, y) for name, x, y in zip(support, c0, c1)}
        beta = (model.intersect(P0, C), model.intersect(P1, C))
        chambers.append(Chamber(t0, end, tuple(support), coeffs, beta))
        if root is not None:
            return ChamberScan(tuple(chambers))
        t0 = end
    else:
        raise ComputationError("chamber cap exceeded")
    return ChamberScan(tuple(chambers))


def mu(model: SurfaceModel, D: DivisorClass, C_flag: DivisorClass) -> Fraction:
    return chamber_scan(model, D, C_flag).mu


# bodies ----------------------------------------------------------------------


@dataclass(frozen=True)
class OkBody2D:
    a: Fraction
    mu: Fraction
    breakpoints: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]  # values at the breakpoints
    beta: tuple[Fraction, ...]
    polytope: QPolytope

    def _interp(self, values, t) -> Fraction:
        t = Fraction(t)
        if not self.a <= t <= self.mu:
            raise ComputationError(f"t = {t} outside [{self.a}, {self.mu}]")
        bp = self.breakpoints
        for i in range(len(bp) - 1):
            if bp[i] <= t <= bp[i + 1]:
                w = (t - bp[i]) / (bp[i + 1] - bp[i])
                return values[i] + w * (values[i + 1] - values[i])
        return values[0]

    def alpha_at(self, t) -> Fraction:
        return self._interp(self.alpha, t)

    def beta_at(self, t) -> Fraction:
        return self._interp(self.beta, t)


def _ord_along(N: Mapping[str, Fraction], flag_name: str | None, ord_data: Mapping[str, Fraction] | None) -> Fraction:
    """``ord_x(N|_C)`` for ``N`` with the flag curve removed; 0 at a generic point."""
    if ord_data is None:
        return Fraction(0)
    total = Fraction(0)
    for name, a in N.items():
        if name == flag_name or not a:
            continue
        if name not in ord_data:
            raise ModelError(f"explicit point mode needs ord data for curve {name!r}", f"ord_data.{name}")
        total += a * Fraction(ord_data[name])
    return total


def _check_mode(point_mode: str, ord_data) -> Mapping[str, Fraction] | None:
    if point_mode == "generic":
        return None
    if point_mode == "explicit":
        if ord_data is None:
            raise ModelError("explicit point mode needs ord data", "ord_data")
        return {k: Fraction(v) for k, v in ord_data.items()}
    raise ModelError(f"unknown point mode {point_mode!r}", "point_mode")


def okounkov_body_surface(
    model: SurfaceModel,
    D: DivisorClass,
    C_flag: DivisorClass,
    point_mode: str = "generic",
    ord_data: Mapping[str, object] | None = None,
) -> OkBody2D:
    """Okounkov polygon of ``D`` for the flag ``(C, x)``.

    ``point_mode="generic"`` takes ``x`` off every other declared curve.
    ``"explicit"`` reads ``ord_data[name]``, the local intersection number
    at ``x`` of each declared curve with ``C``.
    """
    D = model.divisor(D)
    C = model.divisor(C_flag)
    ords = _check_mode(point_mode, ord_data)
    flag_name = model.curve_named(C)
    z = zariski(model, D)
    a = z.N.get(flag_name, Fraction(0)) if flag_name else Fraction(0)
    scan = chamber_scan(model, D, C)
    if a > scan.mu:
        raise ComputationError("flag coefficient exceeds mu")
    ts = sorted({a, scan.mu} | {b for b in scan.breakpoints if a < b < scan.mu})
    alpha, beta = [], []
    for t in ts:
        ch = scan.chamber_at(t)
        N_t = {name: ch.coefficient(name, t) for name in ch.support}
        al = _ord_along(N_t, flag_name, ords)
        alpha.append(al)
        beta.append(al + _ev(ch.beta, t))
    pts = [(t, y) for t, y in zip(ts, alpha)] + [(t, y) for t, y in zip(ts, beta)]
    return OkBody2D(a, scan.mu, tuple(ts), tuple(alpha), tuple(beta), geometry.hull(pts))


def translate_decomposition(
    model: SurfaceModel,
    D: DivisorClass,
    C_flag: DivisorClass,
    point_mode: str = "generic",
    ord_data: Mapping[str, object] | None = None,
) -> tuple[OkBody2D, tuple[Fraction, Fraction], OkBody2D]:
    """Bodies of ``P`` and ``D`` and the shift relating them.

    The shift is ``(coefficient of C in N, ord_x((N - aC)|_C))``. Both
    bodies are computed independently and compared; a mismatch raises.
    """
    D = model.divisor(D)
    C = model.divisor(C_flag)
    ords = _check_mode(point_mode, ord_data)
    z = zariski(model, D)
    flag_name = model.curve_named(C)
    a = z.N.get(flag_name, Fraction(0)) if flag_name else Fraction(0)
    shift = (a, _ord_along(z.N, flag_name, ords))
    body_P = okounkov_body_surface(model, z.P, C, point_mode, ord_data)
    body_D = okounkov_body_surface(model, D, C, point_mode, ord_data)
    moved = geometry.affine_image(body_P.polytope, 1, shift)
    if moved != body_D.polytope:
        raise ComputationError(f"translate check failed: {moved} != {body_D.polytope}")
    return body_P, shift, body_D


def restricted_body(model: SurfaceModel, D: DivisorClass, C: DivisorClass) -> QPolytope:
    """``[0, (D . C)]``, the body of ``D`` restricted to a rational flag curve."""
    deg = model.intersect(model.divisor(D), model.divisor(C))
    if deg < 0:
        raise ComputationError("restriction has negative degree")
    return geometry.hull([(0,), (deg,)])
