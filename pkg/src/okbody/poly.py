"""Sparse multivariate polynomials with rational coefficients.

``MPoly`` is deliberately small: it supports the ring operations, exact
division by a single polynomial, substitution, and parsing of expressions
such as ``"v^2 - u*w"``. Instances are immutable and hashable.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class MPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "MPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        i = variables.index(name)
        return cls(variables, {tuple(int(j == i) for j in range(len(variables))): 1})

    @classmethod
    def monomial(cls, exp: Exponent, variables: Sequence[str], coeff=1) -> "MPoly":
        return cls(variables, {tuple(exp): coeff})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "MPoly":
        """Parse ``+ - * ^ **``, integer/rational constants, parentheses and
        variable names into a polynomial over ``variables``."""
        variables = tuple(variables)
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        return _eval_ast(tree.body, variables)

    # basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def lex_min_exponent(self) -> Exponent:
        return min(self.terms)

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def leading(self) -> tuple[Exponent, Fraction]:
        """Lex-largest term."""
        e = max(self.terms)
        return e, self.terms[e]

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variables")
            return other
        return MPoly.const(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self == MPoly.const(other, self.variables)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def exact_div(self, g: "MPoly") -> "MPoly | None":
        """Quotient ``self / g`` if ``g`` divides ``self`` exactly, else None.

        Division by a single polynomial in lex order: the remainder is zero
        iff g divides, and a leading term not divisible by lt(g) already
        certifies a nonzero remainder.
        """
        g = self._coerce(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = g.leading()
        p = dict(self.terms)
        q: dict[Exponent, Fraction] = {}
        while p:
            e = max(p)
            c = p[e]
            if any(a < b for a, b in zip(e, lt_e)):
                return None
            shift = tuple(a - b for a, b in zip(e, lt_e))
            f = c / lt_c
            q[shift] = f
            for ge, gc in g.terms.items():
                key = tuple(a + b for a, b in zip(ge, shift))
                v = p.get(key, 0) - f * gc
                if v:
                    p[key] = v
                else:
                    p.pop(key, None)
        return MPoly(self.variables, q)

    def compose(self, images: Mapping[str, "MPoly"] | Sequence["MPoly"]) -> "MPoly":
        """Substitute each variable by a polynomial; all images share one ring.

        ``images`` is either a sequence aligned with ``self.variables`` or a
        mapping by variable name (missing names must not occur in ``self``).
        """
        if isinstance(images, Mapping):
            seq = [images.get(v) for v in self.variables]
        else:
            seq = list(images)
        ring = next(p.variables for p in seq if p is not None)
        result = MPoly(ring)
        powers: list[dict[int, MPoly]] = [{} for _ in seq]

        def power(i, k):
            if k not in powers[i]:
                if seq[i] is None:
                    raise ValueError(f"no image for variable {self.variables[i]}")
                powers[i][k] = seq[i] ** k
            return powers[i][k]

        for exp, c in sorted(self.terms.items()):
            term = MPoly.const(c, ring)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(values[v]) for v in self.variables]
        for exp, c in self.terms.items():
            term = c
            for x, k in zip(vals, exp):
                term *= x**k
            total += term
        return total

    def restrict(self, values: Mapping[str, object]) -> "MPoly":
        """Set some variables to constants, keeping the same variable list."""
        out: dict[Exponent, Fraction] = {}
        idx = {self.variables.index(v): Fraction(x) for v, x in values.items()}
        for exp, c in self.terms.items():
            new = list(exp)
            for i, x in idx.items():
                c = c * x ** exp[i]
                new[i] = 0
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return MPoly(self.variables, out)

    # display --------------------------------------------------------------

    def __repr__(self):
        return f"MPoly({str(self)!r}, {self.variables})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, exp) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _eval_ast(node, variables):
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left, variables)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return left ** node.right.value
        right = _eval_ast(node.right, variables)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.degree() > 0:
                raise ValueError("division only by constants")
            return left * MPoly.const(1 / right.coefficient((0,) * len(variables)), variables)
        raise ValueError(f"unsupported operator {type(node.op).__name__}")
    if isinstance(node, ast.UnaryOp):
        val = _eval_ast(node.operand, variables)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return MPoly.const(node.value, variables)
    if isinstance(node, ast.Name):
        if node.id not in variables:
            raise ValueError(f"unknown variable {node.id!r}")
        return MPoly.var(node.id, variables)
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def monomials(nvars: int, degree: int) -> Iterable[Exponent]:
    """Exponent vectors of total degree ``degree``, in decreasing lex order
    (``x0^d`` first)."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            yield (first,) + rest
