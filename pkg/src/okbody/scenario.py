"""Scenario files: JSON documents naming a model, a flag and a command.

Rationals are written as strings (``"1/2"``, ``"-3"``) or integers. A
scenario looks like::

    {
      "command": "body",
      "model": {"kind": "veronese"},
      "flag": {"kind": "surface_curve", "divisor": "v^2 - u*w",
               "param": ["1", "t", "t^2"]},
      "options": {"max_degree": 6}
    }

Model kinds: ``projective_twist`` (n, d), ``veronese``, ``curve`` (c),
``toric`` (vertices), ``surface`` (classes, gram, curves). Flag kinds:
``default``, ``coordinate``, ``hypersurface``, ``surface_curve``, ``toric``
and, for surface models, ``curve_class``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ModelError, OkbodyError, ScenarioParseError
from .poly import MPoly
from .sections import CurveDivisor, ProjectiveTwist, ToricPolytopeModel, VeroneseSurface
from .surface import DivisorClass, SurfaceModel
from .valuation import CoordinateFlag, CurveParam, SurfaceCurveFlag, ToricFlag, hypersurface_flag

COMMANDS = ("body", "zariski", "scan", "semigroup", "certify")
SURFACE_COMMANDS = ("zariski", "scan")


@dataclass
class Scenario:
    command: str | None
    model: Any
    flag: Any
    divisor: DivisorClass | None
    options: dict = field(default_factory=dict)
    digest: str = ""
    anchor: str | None = None

    @property
    def is_surface(self) -> bool:
        return isinstance(self.model, SurfaceModel)


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ScenarioParseError(f"expected an integer or a 'p/q' string, got {x!r}", path)
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioParseError(f"bad rational {x!r}", path) from exc


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ScenarioParseError(f"expected an integer, got {x!r}", path)
    return x


def _get(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise ScenarioParseError("expected an object", path)
    if key not in obj:
        raise ScenarioParseError(f"missing field {key!r}", f"{path}.{key}" if path else key)
    return obj[key]


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise ScenarioParseError("expected a list", path)
    return x


def _model(spec: dict):
    kind = _get(spec, "kind", "model")
    try:
        if kind == "projective_twist":
            names = spec.get("variables")
            return ProjectiveTwist(_int(_get(spec, "n", "model"), "model.n"), _int(_get(spec, "d", "model"), "model.d"),
                                   tuple(names) if names else None)
        if kind == "veronese":
            return VeroneseSurface()
        if kind == "curve":
            return CurveDivisor(_int(_get(spec, "c", "model"), "model.c"))
        if kind == "toric":
            verts = _list(_get(spec, "vertices", "model"), "model.vertices")
            return ToricPolytopeModel(tuple(
                tuple(_rational(x, f"model.vertices[{i}]") for x in _list(v, f"model.vertices[{i}]"))
                for i, v in enumerate(verts)
            ))
        if kind == "surface":
            classes = _list(_get(spec, "classes", "model"), "model.classes")
            gram = [
                [_rational(x, f"model.gram[{i}]") for x in _list(row, f"model.gram[{i}]")]
                for i, row in enumerate(_list(_get(spec, "gram", "model"), "model.gram"))
            ]
            curves = _get(spec, "curves", "model")
            if not isinstance(curves, dict):
                raise ScenarioParseError("curves must map names to classes", "model.curves")
            return SurfaceModel(classes, gram, curves)
    except ModelError as exc:
        if exc.path is None:
            exc.path = "model"
        raise
    raise ModelError(f"unknown model kind {kind!r}", "model.kind")


def _poly(text, variables, path) -> MPoly:
    if not isinstance(text, str):
        raise ScenarioParseError("expected a polynomial string", path)
    try:
        return MPoly.parse(text, variables)
    except ValueError as exc:
        raise ModelError(str(exc), path) from exc


def _flag(spec: dict | None, model):
    if spec is None:
        return None
    kind = _get(spec, "kind", "flag")
    variables = getattr(model, "variables", None)
    try:
        if kind == "default":
            return None
        if kind == "hypersurface":
            if not isinstance(model, ProjectiveTwist):
                raise ModelError("hypersurface flags need a projective_twist model", "flag.kind")
            return hypersurface_flag(model.variables, model.d)
        if kind == "coordinate":
            coords = tuple(_list(_get(spec, "coords", "flag"), "flag.coords"))
            chart = spec.get("chart")
            if chart is None:
                return CoordinateFlag(coords)
            chart_polys = {v: _poly(chart.get(v, v), coords, f"flag.chart.{v}") for v in variables}
            divisors = tuple(_poly(g, variables, f"flag.divisors[{i}]") for i, g in enumerate(spec.get("divisors", [])))
            return CoordinateFlag(coords, chart_polys, divisors)
        if kind == "surface_curve":
            if variables is None or len(variables) != 3:
                raise ModelError("surface_curve flags need a plane model", "flag.kind")
            div = _poly(_get(spec, "divisor", "flag"), variables, "flag.divisor")
            comps = _list(_get(spec, "param", "flag"), "flag.param")
            param = CurveParam(
                tuple(_poly(c, ("t",), f"flag.param[{i}]") for i, c in enumerate(comps)),
                _rational(spec.get("base_point", 0), "flag.base_point"),
            )
            return SurfaceCurveFlag(div, param)
        if kind == "toric":
            vertex = tuple(_int(x, "flag.vertex") for x in _list(_get(spec, "vertex", "flag"), "flag.vertex"))
            basis = tuple(
                tuple(_int(x, f"flag.edge_basis[{i}]") for x in _list(row, f"flag.edge_basis[{i}]"))
                for i, row in enumerate(_list(_get(spec, "edge_basis", "flag"), "flag.edge_basis"))
            )
            return ToricFlag(vertex, basis)
        if kind == "curve_class":
            if not isinstance(model, SurfaceModel):
                raise ModelError("curve_class flags need a surface model", "flag.kind")
            return model.divisor(_get(spec, "class", "flag"), path="flag.class")
    except ModelError as exc:
        if exc.path is None:
            exc.path = "flag"
        raise
    raise ModelError(f"unknown flag kind {kind!r}", "flag.kind")


def parse_scenario(text: str | bytes) -> Scenario:
    raw = text.encode() if isinstance(text, str) else text
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ScenarioParseError(f"invalid JSON: {exc}", "") from exc
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario must be a JSON object", "")
    command = doc.get("command")
    if command is not None and command not in COMMANDS:
        raise ScenarioParseError(f"unknown command {command!r}", "command")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ScenarioParseError("options must be an object", "options")
    model = _model(doc["model"]) if "model" in doc else None
    flag = _flag(doc.get("flag"), model) if model is not None else None
    divisor = None
    if "divisor" in doc:
        if not isinstance(model, SurfaceModel):
            raise ModelError("a divisor is only meaningful for surface models", "divisor")
        divisor = model.divisor(doc["divisor"], path="divisor")
    return Scenario(command, model, flag, divisor, options, digest, doc.get("anchor"))


def load_scenario(path: str | Path) -> Scenario:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario: {exc}", "") from exc
    return parse_scenario(raw)


__all__ = ["Scenario", "parse_scenario", "load_scenario", "OkbodyError"]
