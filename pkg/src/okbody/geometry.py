"""Exact rational polytopes in ambient dimension at most three.

A :class:`QPolytope` is stored in V-representation as its minimal vertex
list, sorted lexicographically; two polytopes are equal exactly when their
vertex lists are. Lower-dimensional polytopes (points, segments, polygons in
space) are ordinary values carrying their ``affine_dim``.

All arithmetic is done with :class:`fractions.Fraction`; hull computations
rescale to integer coordinates first, which keeps orientation tests cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .errors import ComputationError

QVector = tuple[Fraction, ...]

MAX_DIM = 3


def qvec(*coords) -> QVector:
    """Build a rational vector, accepting ints, Fractions and "p/q" strings."""
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    return tuple(Fraction(c) for c in coords)


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def _cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _orient2(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _orient3(a, b, c, d):
    return _dot(_cross(_sub(b, a), _sub(c, a)), _sub(d, a))


def _primitive(normal: Sequence[Fraction], offset: Fraction) -> tuple[tuple[int, ...], Fraction]:
    """Rescale an inequality so that its normal is a primitive integer vector."""
    den = 1
    for x in normal:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in normal]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ComputationError("zero normal vector")
    return tuple(x // g for x in ints), Fraction(offset) * den / g


def _common_denominator(points: Sequence[Sequence[Fraction]]) -> int:
    den = 1
    for p in points:
        for x in p:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return den


def _to_integer_points(points: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    den = _common_denominator(points)
    return [tuple(int(x * den) for x in p) for p in points]


def _hull2_order(pts: Sequence[Sequence[int]]) -> list[int]:
    """Monotone chain: indices of the strict vertices in counter-clockwise
    order, starting from the lexicographically smallest point."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])

    def chain(idx):
        out: list[int] = []
        for i in idx:
            while len(out) >= 2 and _orient2(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def _hull3(pts: Sequence[Sequence[int]]) -> tuple[list[int], list[tuple[tuple[int, ...], int]]]:
    """Incremental 3d hull of affinely spanning, pairwise distinct integer points.

    Returns the indices of the true vertices and the list of facet planes
    ``(normal, offset)`` with ``normal . x <= offset`` on the hull.
    """
    n = len(pts)
    i0 = 0
    i1 = n - 1
    i2 = next(i for i in range(n) if any(_cross(_sub(pts[i1], pts[i0]), _sub(pts[i], pts[i0]))))
    i3 = next(i for i in range(n) if _orient3(pts[i0], pts[i1], pts[i2], pts[i]) != 0)
    tetra = (i0, i1, i2, i3)
    faces: list[tuple[int, int, int]] = []
    for opposite in tetra:
        a, b, c = (i for i in tetra if i != opposite)
        if _orient3(pts[a], pts[b], pts[c], pts[opposite]) > 0:
            b, c = c, b
        faces.append((a, b, c))

    # extreme points first so that most of the remaining ones are discarded
    # after a single pass over few faces
    rest = [i for i in range(n) if i not in tetra]
    rest.sort(key=lambda i: -sum(abs(x) for x in pts[i]))
    for k in rest:
        p = pts[k]
        visible = [f for f in faces if _orient3(pts[f[0]], pts[f[1]], pts[f[2]], p) > 0]
        if not visible:
            continue
        edges = set()
        for a, b, c in visible:
            edges.update(((a, b), (b, c), (c, a)))
        horizon = [(a, b) for (a, b) in edges if (b, a) not in edges]
        vis = set(visible)
        faces = [f for f in faces if f not in vis]
        faces.extend((a, b, k) for a, b in horizon)

    planes = set()
    for a, b, c in faces:
        nrm = _cross(_sub(pts[b], pts[a]), _sub(pts[c], pts[a]))
        g = math.gcd(*nrm)
        nrm = tuple(x // g for x in nrm)
        planes.add((nrm, _dot(nrm, pts[a])))
    candidates = sorted({i for f in faces for i in f})
    vertices = []
    for i in candidates:
        active = [nrm for nrm, off in planes if _dot(nrm, pts[i]) == off]
        if len(active) >= 3 and linalg.rank(active) == 3:
            vertices.append(i)
    return vertices, sorted(planes)


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``normal . x <= offset``."""

    normal: QVector
    offset: Fraction

    def contains(self, x: Sequence) -> bool:
        return _dot(self.normal, x) <= self.offset


class _AffineChart:
    """Affine hull of a finite point set with a coordinate projection that is
    injective on it (the pivot columns of the direction matrix)."""

    def __init__(self, points: Sequence[QVector]):
        self.base = points[0]
        self.dirs = [_sub(p, self.base) for p in points[1:]]
        if self.dirs:
            red, pivots = linalg.rref(self.dirs)
            self.basis = [row for row in red[: len(pivots)]]
        else:
            pivots = []
            self.basis = []
        self.pivots = pivots
        self.dim = len(pivots)

    def project(self, p: Sequence) -> tuple:
        return tuple(p[j] for j in self.pivots)

    def equations(self, ambient: int) -> list[tuple[list[Fraction], Fraction]]:
        """Equations ``n . x = c`` cutting out the affine hull."""
        if self.dim == 0:
            normals = [[Fraction(int(i == j)) for j in range(ambient)] for i in range(ambient)]
        else:
            normals = linalg.nullspace(self.basis)
        return [(nrm, _dot(nrm, self.base)) for nrm in normals]


@dataclass(frozen=True)
class QPolytope:
    """Rational polytope in canonical vertex form.

    Build instances with :func:`hull`; the constructor does not check
    minimality.
    """

    dim: int
    vertices: tuple[QVector, ...]
    affine_dim: int

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ComputationError(f"ambient dimension must be between 1 and {MAX_DIM}")

    @cached_property
    def _chart(self) -> _AffineChart:
        return _AffineChart(self.vertices)

    @cached_property
    def halfspaces(self) -> tuple[Halfspace, ...]:
        """Inequality description, normals primitive integral, sorted.

        For lower-dimensional polytopes the affine hull equations appear as
        pairs of opposite halfspaces.
        """
        chart = self._chart
        found: set[tuple[tuple[int, ...], Fraction]] = set()
        for nrm, c in chart.equations(self.dim):
            found.add(_primitive(nrm, c))
            found.add(_primitive([-x for x in nrm], -c))
        for nrm_proj, off in self._facets_projected():
            nrm = [Fraction(0)] * self.dim
            for j, x in zip(chart.pivots, nrm_proj):
                nrm[j] = Fraction(x)
            found.add(_primitive(nrm, off))
        return tuple(Halfspace(tuple(Fraction(x) for x in nrm), off) for nrm, off in sorted(found))

    def _facets_projected(self) -> list[tuple[tuple, Fraction]]:
        chart = self._chart
        k = chart.dim
        proj = [chart.project(v) for v in self.vertices]
        if k == 0:
            return []
        if k == 1:
            lo, hi = min(proj), max(proj)
            return [((Fraction(-1),), -lo[0]), ((Fraction(1),), hi[0])]
        if k == 2:
            order = _hull2_order(_to_integer_points(proj))
            cyc = [proj[i] for i in order]
            out = []
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                nrm = (b[1] - a[1], a[0] - b[0])
                out.append((nrm, _dot(nrm, a)))
            return out
        den = _common_denominator(proj)
        _, planes = _hull3(_to_integer_points(proj))
        return [(nrm, Fraction(off, den)) for nrm, off in planes]

    def contains(self, point: Sequence) -> bool:
        x = qvec(point)
        if len(x) != self.dim:
            raise ComputationError("dimension mismatch")
        return all(h.contains(x) for h in self.halfspaces)

    def issubset(self, other: "QPolytope") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def support(self, direction: Sequence) -> Fraction:
        """Support function: max of ``direction . v`` over the polytope."""
        return max(_dot(direction, v) for v in self.vertices)

    def cyclic_vertices(self) -> list[QVector]:
        """Vertices of a polygon (``affine_dim == 2``) in boundary order."""
        if self.affine_dim != 2:
            raise ComputationError("cyclic order needs a polygon")
        proj = [self._chart.project(v) for v in self.vertices]
        return [self.vertices[i] for i in _hull2_order(_to_integer_points(proj))]

    def __str__(self) -> str:
        verts = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"QPolytope[{verts}]"


def hull(points: Iterable[Sequence]) -> QPolytope:
    """Convex hull of a finite nonempty set of rational points."""
    pts = [qvec(p) for p in points]
    if not pts:
        raise ComputationError("no points")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ComputationError("points of mixed dimensions")
    if not 1 <= dim <= MAX_DIM:
        raise ComputationError(f"ambient dimension must be between 1 and {MAX_DIM}")
    pts = sorted(set(pts))
    chart = _AffineChart(pts)
    k = chart.dim
    if k == 0:
        verts = pts
    else:
        proj = [chart.project(p) for p in pts]
        if k == 1:
            verts = [pts[0], pts[-1]]
        elif k == 2:
            verts = [pts[i] for i in _hull2_order(_to_integer_points(proj))]
        else:
            idx, _ = _hull3(_to_integer_points(proj))
            verts = [pts[i] for i in idx]
    return QPolytope(dim, tuple(sorted(verts)), k)


def _simplex_volume(vs: Sequence[QVector]) -> Fraction:
    d = len(vs) - 1
    return abs(linalg.det([_sub(v, vs[0]) for v in vs[1:]])) / math.factorial(d)


def volume(poly: QPolytope) -> Fraction:
    """Euclidean volume in the ambient dimension; 0 for lower-dimensional
    polytopes. Computed by a fan triangulation from the first vertex."""
    if poly.affine_dim < poly.dim:
        return Fraction(0)
    v0 = poly.vertices[0]
    if poly.dim == 1:
        return poly.vertices[-1][0] - v0[0]
    if poly.dim == 2:
        cyc = poly.cyclic_vertices()
        return sum((_simplex_volume([v0, a, b]) for a, b in zip(cyc[1:], cyc[2:])), Fraction(0))
    total = Fraction(0)
    for h in poly.halfspaces:
        if _dot(h.normal, v0) == h.offset:
            continue
        face = hull(v for v in poly.vertices if _dot(h.normal, v) == h.offset)
        cyc = face.cyclic_vertices()
        for a, b in zip(cyc[1:], cyc[2:]):
            total += _simplex_volume([v0, cyc[0], a, b])
    return total


def slice(poly: QPolytope, axis: int, t) -> QPolytope:
    """The section ``{x in P : x[axis] = t}`` with the axis coordinate dropped.

    ``axis`` is 0-based.
    """
    t = Fraction(t)
    if poly.dim < 2:
        raise ComputationError("slicing needs ambient dimension at least 2")
    if not 0 <= axis < poly.dim:
        raise ComputationError(f"axis {axis} out of range")
    lo = min(v[axis] for v in poly.vertices)
    hi = max(v[axis] for v in poly.vertices)
    if not lo <= t <= hi:
        raise ComputationError("empty slice")
    pts = [v for v in poly.vertices if v[axis] == t]
    for u, w in itertools.permutations(poly.vertices, 2):
        if u[axis] < t < w[axis]:
            lam = (t - u[axis]) / (w[axis] - u[axis])
            pts.append(tuple(a + lam * (b - a) for a, b in zip(u, w)))
    return hull(p[:axis] + p[axis + 1 :] for p in pts)


def affine_image(poly: QPolytope, scale, translate: Sequence = None) -> QPolytope:
    """``{scale * x + translate : x in P}`` for ``scale > 0``."""
    scale = Fraction(scale)
    if scale <= 0:
        raise ComputationError("scale must be positive")
    shift = qvec(translate) if translate is not None else (Fraction(0),) * poly.dim
    if len(shift) != poly.dim:
        raise ComputationError("translation dimension mismatch")
    return hull(tuple(scale * x + s for x, s in zip(v, shift)) for v in poly.vertices)


def minkowski_sum(p: QPolytope, q: QPolytope) -> QPolytope:
    if p.dim != q.dim:
        raise ComputationError("dimension mismatch")
    return hull(tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices)


def is_simplex(poly: QPolytope) -> bool:
    return len(poly.vertices) == poly.affine_dim + 1


def simplex(n: int, c=1) -> QPolytope:
    """Hull of 0, e_1, ..., e_{n-1}, c * e_n."""
    c = Fraction(c)
    pts = [tuple(Fraction(0) for _ in range(n))]
    for i in range(n):
        pts.append(tuple(Fraction(c if (i == j == n - 1) else int(i == j)) for j in range(n)))
    return hull(pts)


def lattice_points(poly: QPolytope) -> list[tuple[int, ...]]:
    """All integer points of the polytope, sorted lexicographically."""
    ranges = []
    for i in range(poly.dim):
        lo = math.ceil(min(v[i] for v in poly.vertices))
        hi = math.floor(max(v[i] for v in poly.vertices))
        ranges.append(range(lo, hi + 1))
    hs = poly.halfspaces
    return [p for p in itertools.product(*ranges) if all(_dot(h.normal, p) <= h.offset for h in hs)]
