"""Explicit graded section models ``m -> H^0(X, mL)``.

Each model is a closed-form family with a monomial (or lattice point) basis
in every degree:

=====================  ===============================  ====================
model                  basis of H^0(mL)                 (L^n)
=====================  ===============================  ====================
``ProjectiveTwist``    monomials of degree m*d          d^n
``VeroneseSurface``    monomials of degree 2m in u,v,w  4
``CurveDivisor``       1, t, ..., t^(m*c)               c
``ToricPolytopeModel``  lattice points of m*P           n! vol(P)
=====================  ===============================  ====================

Basis order is fixed: monomials of one degree are listed in decreasing
lexicographic order of exponent vectors (``x_0^D`` first), powers of ``t``
increasing, lattice points increasing lexicographically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import geometry
from .errors import ModelError
from .geometry import QPolytope
from .poly import MPoly, monomials


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    elements: tuple


@dataclass(frozen=True)
class ProjectiveTwist:
    """``O(d)`` on ``P^n``; homogeneous coordinates default to ``u, v, w``
    for the plane and ``x0..xn`` otherwise."""

    n: int
    d: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ModelError("projective twist needs n >= 1 and d >= 1")
        if self.names is not None and len(self.names) != self.n + 1:
            raise ModelError("need n + 1 variable names")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def variables(self) -> tuple[str, ...]:
        if self.names is not None:
            return tuple(self.names)
        if self.n == 2:
            return ("u", "v", "w")
        return tuple(f"x{i}" for i in range(self.n + 1))

    @property
    def section_degree(self) -> int:
        return self.d

    def basis(self, m: int) -> GradedBasis:
        return GradedBasis(m, tuple(MPoly.monomial(e, self.variables) for e in monomials(self.n + 1, m * self.d)))

    def h0(self, m: int) -> int:
        return math.comb(m * self.d + self.n, self.n)

    def self_intersection(self) -> int:
        return self.d**self.n


@dataclass(frozen=True)
class VeroneseSurface:
    """``P^2`` with ``O(2)``, embedded in ``P^5`` by
    ``[u, v, w] -> [u^2, uv, v^2, vw, w^2, uw]``."""

    EMBEDDING = ("u^2", "u*v", "v^2", "v*w", "w^2", "u*w")
    variables = ("u", "v", "w")
    n = 2
    d = 2

    @property
    def dim(self) -> int:
        return 2

    @property
    def section_degree(self) -> int:
        return 2

    def basis(self, m: int) -> GradedBasis:
        return GradedBasis(m, tuple(MPoly.monomial(e, self.variables) for e in monomials(3, 2 * m)))

    def h0(self, m: int) -> int:
        return math.comb(2 * m + 2, 2)

    def self_intersection(self) -> int:
        return 4

    def pullback(self, linear_form: Sequence) -> MPoly:
        """Quadric in ``u, v, w`` cut by the hyperplane ``sum a_i x_i = 0`` of ``P^5``."""
        if len(linear_form) != 6:
            raise ModelError("a hyperplane of P^5 needs 6 coefficients")
        out = MPoly(self.variables)
        for a, q in zip(linear_form, self.EMBEDDING):
            out = out + MPoly.parse(q, self.variables) * Fraction(a)
        return out


@dataclass(frozen=True)
class CurveDivisor:
    """A degree ``c`` divisor on ``P^1`` in the affine coordinate ``t``."""

    c: int
    variables = ("t",)

    def __post_init__(self):
        if self.c < 1:
            raise ModelError("curve divisor degree must be positive")

    @property
    def dim(self) -> int:
        return 1

    def basis(self, m: int) -> GradedBasis:
        return GradedBasis(m, tuple(MPoly.monomial((j,), self.variables) for j in range(m * self.c + 1)))

    def h0(self, m: int) -> int:
        return m * self.c + 1

    def self_intersection(self) -> int:
        return self.c


@dataclass(frozen=True)
class ToricPolytopeModel:
    """Toric variety and divisor given by a lattice polytope (vertex list)."""

    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = []
        for v in self.vertices:
            q = geometry.qvec(v)
            if any(x.denominator != 1 for x in q):
                raise ModelError(f"vertex {v} is not a lattice point")
            verts.append(tuple(int(x) for x in q))
        if not verts:
            raise ModelError("toric polytope needs vertices")
        object.__setattr__(self, "vertices", tuple(verts))

    @cached_property
    def polytope(self) -> QPolytope:
        return geometry.hull(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def basis(self, m: int) -> GradedBasis:
        return GradedBasis(m, tuple(geometry.lattice_points(geometry.affine_image(self.polytope, m))))

    def h0(self, m: int) -> int:
        return len(self.basis(m).elements)

    def self_intersection(self) -> int:
        c = math.factorial(self.dim) * geometry.volume(self.polytope)
        if c.denominator != 1:
            raise ModelError("normalized volume of a lattice polytope must be an integer")
        return int(c)


SectionModel = ProjectiveTwist | VeroneseSurface | CurveDivisor | ToricPolytopeModel


def basis(model: SectionModel, m: int) -> GradedBasis:
    if m < 1:
        raise ModelError("degree must be positive")
    return model.basis(m)


def self_intersection(model: SectionModel) -> int:
    return model.self_intersection()


def predicted_simplex(model: SectionModel) -> QPolytope:
    """Simplex with vertices ``0, e_1, ..., e_(n-1), c e_n``, ``c = (L^n)``.

    This is the body for a flag cut out by members of ``|L|`` when ``L`` is
    very ample; callers assert that hypothesis.
    """
    return geometry.simplex(model.dim, model.self_intersection())
