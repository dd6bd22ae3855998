"""Command line entry point ``okbody``.

Exit codes: 0 success, 1 failed verification, 2 unreadable scenario,
3 invalid model, 4 computation error. Errors are printed to stdout as a
JSON object ``{"error": {"type", "message", "path"}}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, plot
from .errors import OkbodyError, ScenarioParseError
from .runner import dumps, error_doc, exit_code, run
from .scenario import load_scenario
from .verify import verify_paper


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _body_for_plot(sc):
    from . import semigroup, surface

    if sc.is_surface:
        mode = sc.options.get("point_mode", "generic")
        return surface.okounkov_body_surface(sc.model, sc.divisor, sc.flag, mode, sc.options.get("ord_data"))
    M = sc.options.get("max_degree", semigroup.DEFAULT_M_MAX)
    return semigroup.stabilized_body(sc.model, sc.flag, max(M, 2)).polytope


def _apply_overrides(sc, args) -> None:
    if getattr(args, "max_degree", None) is not None:
        sc.options["max_degree"] = args.max_degree
    if getattr(args, "point_mode", None) is not None:
        sc.options["point_mode"] = args.point_mode


def _cmd_compute(args, command: str | None) -> int:
    sc = load_scenario(args.scenario)
    _apply_overrides(sc, args)
    fmt = getattr(args, "format", "doc")
    if fmt == "doc":
        _emit(dumps(run(sc, command)), args.out)
        return 0
    if (command or sc.command) != "body":
        raise ScenarioParseError("csv and svg formats apply to the body command", "format")
    body = _body_for_plot(sc)
    _emit(plot.to_csv(body) if fmt == "csv" else plot.to_svg(body), args.out)
    return 0


def _cmd_plot(args) -> int:
    sc = load_scenario(args.scenario)
    _apply_overrides(sc, args)
    out = args.out or "body.svg"
    svg, table = plot.emit_plot(_body_for_plot(sc), out)
    sys.stdout.write(json.dumps({"svg": str(svg), "csv": str(table)}, sort_keys=True) + "\n")
    return 0


def _cmd_verify(args) -> int:
    lines, ok = verify_paper(args.corpus)
    sys.stdout.write("\n".join(lines) + "\n")
    sys.stdout.write(("all checks passed" if ok else "verification FAILED") + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="okbody", description="Exact Okounkov bodies from section models and surface lattices.")
    p.add_argument("--version", action="version", version=f"okbody {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def scenario_cmd(name, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("scenario", help="scenario JSON file")
        s.add_argument("--max-degree", type=int, help="degree bound for semigroup enumeration")
        s.add_argument("--point-mode", choices=["generic", "explicit"], help="flag point convention on surfaces")
        s.add_argument("--out", help="write output here instead of stdout")
        s.add_argument("--format", choices=["doc", "csv", "svg"], default="doc")
        return s

    scenario_cmd("run", "run the command named inside the scenario")
    for name, text in [
        ("body", "Okounkov body (stabilized hull or surface polygon)"),
        ("zariski", "Zariski decomposition of the scenario divisor"),
        ("scan", "chamber scan of D - tC"),
        ("semigroup", "value semigroup levels up to the degree bound"),
        ("certify", "degree-bounded finite generation report"),
    ]:
        scenario_cmd(name, text)
    v = sub.add_parser("verify-paper", help="run the bundled reproduction corpus")
    v.add_argument("--corpus", help="corpus directory (default: bundled, or $OKBODY_CORPUS)")
    pl = sub.add_parser("plot", help="write an SVG plot and exact vertex CSV of a planar body")
    pl.add_argument("scenario")
    pl.add_argument("--max-degree", type=int)
    pl.add_argument("--point-mode", choices=["generic", "explicit"])
    pl.add_argument("--out", help="SVG path; the CSV goes next to it")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "verify-paper":
            return _cmd_verify(args)
        if args.cmd == "plot":
            return _cmd_plot(args)
        return _cmd_compute(args, None if args.cmd == "run" else args.cmd)
    except (OkbodyError, ZeroDivisionError, ValueError) as exc:
        sys.stdout.write(json.dumps(error_doc(exc), sort_keys=True) + "\n")
        return exit_code(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
