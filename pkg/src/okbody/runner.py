"""Dispatch scenarios to the library and render exact result documents."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from . import __version__, geometry, semigroup, surface
from .errors import ComputationError, ModelError, ScenarioParseError
from .geometry import QPolytope
from .scenario import SURFACE_COMMANDS, Scenario
from .sections import predicted_simplex


def q(x) -> str:
    return str(Fraction(x))


def qv(v) -> list[str]:
    return [q(x) for x in v]


def polytope_doc(P: QPolytope) -> dict:
    return {
        "dim": P.dim,
        "affine_dim": P.affine_dim,
        "vertices": [qv(v) for v in P.vertices],
        "halfspaces": [{"normal": qv(h.normal), "offset": q(h.offset)} for h in P.halfspaces],
        "volume": q(geometry.volume(P)),
        "is_simplex": geometry.is_simplex(P),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _max_degree(sc: Scenario, default: int) -> int:
    m = sc.options.get("max_degree", default)
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ScenarioParseError("max_degree must be a positive integer", "options.max_degree")
    return m


def _point_mode(sc: Scenario):
    mode = sc.options.get("point_mode", "generic")
    return mode, sc.options.get("ord_data")


def _need_surface(sc: Scenario, command: str):
    if not sc.is_surface:
        raise ModelError(f"command {command!r} needs a surface model", "model.kind")
    if sc.divisor is None:
        raise ScenarioParseError("surface scenarios need a divisor", "divisor")


def _need_flag_class(sc: Scenario):
    if not isinstance(sc.flag, surface.DivisorClass):
        raise ScenarioParseError("surface bodies need a curve_class flag", "flag")


def _classes(model: surface.SurfaceModel, d: surface.DivisorClass) -> dict:
    return {name: q(c) for name, c in zip(model.class_names, d.coeffs)}


def _body_section(sc: Scenario) -> dict:
    M = _max_degree(sc, semigroup.DEFAULT_M_MAX)
    body, stabilized, at = semigroup.stabilized_body(sc.model, sc.flag, max(M, 2))
    doc = polytope_doc(body)
    c = sc.model.self_intersection()
    doc.update({
        "stabilized": stabilized,
        "at": at,
        "max_degree": max(M, 2),
        "self_intersection": c,
        "normalized_volume": q(math.factorial(body.dim) * geometry.volume(body)),
        "matches_predicted_simplex": body == predicted_simplex(sc.model),
    })
    return doc


def _body_surface(sc: Scenario) -> dict:
    _need_surface(sc, "body")
    _need_flag_class(sc)
    mode, ords = _point_mode(sc)
    m, D, C = sc.model, sc.divisor, sc.flag
    ok = surface.okounkov_body_surface(m, D, C, mode, ords)
    doc = polytope_doc(ok.polytope)
    body_P, shift, _ = surface.translate_decomposition(m, D, C, mode, ords)
    doc.update({
        "a": q(ok.a),
        "mu": q(ok.mu),
        "breakpoints": qv(ok.breakpoints),
        "alpha": qv(ok.alpha),
        "beta": qv(ok.beta),
        "point_mode": mode,
        "volume_divisor": q(surface.volume_surface(m, D)),
        "translate": {"shift": qv(shift), "body_of_P": [qv(v) for v in body_P.polytope.vertices]},
    })
    return doc


def _zariski(sc: Scenario) -> dict:
    _need_surface(sc, "zariski")
    z = surface.zariski(sc.model, sc.divisor)
    return {
        "P": _classes(sc.model, z.P),
        "N": {k: q(v) for k, v in z.N.items()},
        "support": list(z.support),
        "P_squared": q(sc.model.intersect(z.P, z.P)),
    }


def _scan(sc: Scenario) -> dict:
    _need_surface(sc, "scan")
    _need_flag_class(sc)
    s = surface.chamber_scan(sc.model, sc.divisor, sc.flag)
    return {
        "mu": q(s.mu),
        "breakpoints": qv(s.breakpoints),
        "chambers": [
            {
                "start": q(c.start),
                "end": q(c.end),
                "support": list(c.support),
                "coefficients": {k: qv(f) for k, f in c.coefficients.items()},
                "beta": qv(c.beta),
            }
            for c in s.chambers
        ],
    }


def _semigroup(sc: Scenario) -> dict:
    M = _max_degree(sc, 6)
    g = semigroup.build(sc.model, sc.flag, M)
    return {
        "bound": M,
        "levels": {str(m): [list(v) for v in sorted(g.levels[m])] for m in range(1, M + 1)},
        "sizes": {str(m): len(g.levels[m]) for m in range(1, M + 1)},
        "closed_under_addition": not g.closure_violations(),
        "body": [qv(v) for v in semigroup.body_estimate(g).vertices],
    }


def _parse_gens(raw) -> list:
    try:
        return [(int(m), tuple(int(x) for x in nu)) for m, nu in raw]
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError("generators must be [m, [nu...]] pairs", "options.generators") from exc


def _certify(sc: Scenario) -> dict:
    doc: dict[str, Any] = {}
    if sc.model is not None:
        if sc.is_surface:
            raise ModelError("certify needs a section model", "model.kind")
        M = _max_degree(sc, 6)
        g = semigroup.build(sc.model, sc.flag, M)
        raw = sc.options.get("generators")
        gens = _parse_gens(raw) if raw is not None else [(1, nu) for nu in g.levels[1]]
        rep = semigroup.is_generated_up_to(g, gens, M)
        doc.update({
            "bound": M,
            "generated_up_to": rep.generated_up_to,
            "witnesses_missing": [[m, list(nu)] for m, nu in rep.witnesses_missing],
            "vertex_hit": rep.vertex_hit,
            "consistent": (not rep.vertex_hit) or rep.generated_up_to == M,
        })
    checks = []
    for i, case in enumerate(sc.options.get("volume_checks", [])):
        try:
            vol, d, n = Fraction(case["volume"]), int(case["degree"]), int(case["dimension"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioParseError("volume checks need volume, degree, dimension", f"options.volume_checks[{i}]") from exc
        checks.append({"volume": q(vol), "degree": d, "dimension": n,
                       "denominator_divides": semigroup.volume_denominator_check(vol, d, n)})
    if checks:
        doc["volume_checks"] = checks
    if not doc:
        raise ScenarioParseError("certify needs a model or volume checks", "model")
    return doc


def compute(sc: Scenario, command: str | None = None) -> dict:
    command = command or sc.command
    if command is None:
        raise ScenarioParseError("no command given", "command")
    if sc.model is None and command != "certify":
        raise ScenarioParseError("missing field 'model'", "model")
    if command == "body":
        return _body_surface(sc) if sc.is_surface else _body_section(sc)
    if command in SURFACE_COMMANDS:
        return {"zariski": _zariski, "scan": _scan}[command](sc)
    if sc.is_surface:
        raise ModelError(f"command {command!r} needs a section model", "model.kind")
    if command == "semigroup":
        return _semigroup(sc)
    if command == "certify":
        return _certify(sc)
    raise ScenarioParseError(f"unknown command {command!r}", "command")


def run(sc: Scenario, command: str | None = None) -> dict:
    """Result document for a parsed scenario."""
    command = command or sc.command
    result = compute(sc, command)
    return {
        "command": command,
        "result": result,
        "provenance": {"library": "okbody", "version": __version__, "scenario_sha256": sc.digest},
    }


def error_doc(exc: Exception) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc), "path": getattr(exc, "path", None)}}


def exit_code(exc: Exception) -> int:
    if isinstance(exc, ScenarioParseError):
        return 2
    if isinstance(exc, ModelError):
        return 3
    if isinstance(exc, ComputationError):
        return 4
    return 4
