"""Reproduction suite over the bundled scenario corpus.

Each case is a pair ``NAME.scenario.json`` / ``NAME.expected.json``. The
expected file names an anchor and maps dotted paths of the result document
to their required values, e.g. ``{"result.vertices": [["0", "0"], ...]}``.
Cases sharing an anchor pass or fail together.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .errors import OkbodyError
from .runner import run
from .scenario import load_scenario

CORPUS_ENV = "OKBODY_CORPUS"

ANCHORS = (
    "example-triangle",
    "curve-segment",
    "very-ample-simplex",
    "surface-simplex-schema",
    "translate-corollary",
    "denominator-remark",
    "vertex-hit",
)


def corpus_dir() -> Path:
    override = os.environ.get(CORPUS_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("okbody") / "corpus"))


def _lookup(doc, dotted: str):
    cur = doc
    for part in dotted.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        else:
            cur = cur[part]
    return cur


def check_case(scenario_path: Path, expected_path: Path) -> tuple[str, list[str]]:
    """Return the anchor and a list of mismatch descriptions (empty on success)."""
    expected = json.loads(expected_path.read_text())
    anchor = expected.get("anchor", "unanchored")
    try:
        doc = run(load_scenario(scenario_path), expected.get("command"))
    except OkbodyError as exc:
        return anchor, [f"{scenario_path.name}: {type(exc).__name__}: {exc}"]
    problems = []
    for key, want in sorted(expected.get("expect", {}).items()):
        try:
            got = _lookup(doc, key)
        except (KeyError, IndexError, ValueError, TypeError):
            problems.append(f"{scenario_path.name}: {key} missing")
            continue
        if got != want:
            problems.append(f"{scenario_path.name}: {key} = {json.dumps(got)}, expected {json.dumps(want)}")
    return anchor, problems


def verify_paper(directory: str | Path | None = None) -> tuple[list[str], bool]:
    """Run the corpus; return summary lines and overall success."""
    root = Path(directory) if directory is not None else corpus_dir()
    results: dict[str, list[str]] = {}
    counts: dict[str, int] = {}
    for exp in sorted(root.glob("*.expected.json")):
        scen = exp.with_name(exp.name.replace(".expected.json", ".scenario.json"))
        if not scen.exists():
            anchor, problems = json.loads(exp.read_text()).get("anchor", "unanchored"), [f"{scen.name} not found"]
        else:
            anchor, problems = check_case(scen, exp)
        results.setdefault(anchor, []).extend(problems)
        counts[anchor] = counts.get(anchor, 0) + 1
    for a in ANCHORS:
        if a not in results:
            results[a], counts[a] = ["no cases in corpus"], 0
    order = list(ANCHORS) + sorted(a for a in results if a not in ANCHORS)
    lines = []
    ok = True
    for a in order:
        problems = results[a]
        status = "PASS" if not problems else "FAIL"
        ok = ok and not problems
        lines.append(f"{status}  {a}  ({counts[a]} cases)")
        lines.extend(f"      {p}" for p in problems)
    return lines, ok
