import json
import re
import shutil
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from okbody import geometry, plot
from okbody.cli import main
from okbody.errors import ComputationError, ModelError, ScenarioParseError
from okbody.runner import run
from okbody.scenario import parse_scenario
from okbody.sections import VeroneseSurface
from okbody.semigroup import conic_flag, stabilized_body
from okbody.surface import SurfaceModel, okounkov_body_surface
from okbody.verify import ANCHORS, CORPUS_ENV, corpus_dir, verify_paper

BLP = {"kind": "surface", "classes": ["H", "E"], "gram": [["1", "0"], ["0", "-1"]], "curves": {"E": "E", "F": "H - E"}}
VERONESE = {
    "command": "body",
    "model": {"kind": "veronese"},
    "flag": {"kind": "surface_curve", "divisor": "v^2 - u*w", "param": ["1", "t", "t^2"]},
    "options": {"max_degree": 6},
}


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def verts(doc):
    return sorted(tuple(F(x) for x in v) for v in doc["result"]["vertices"])


# run ----------------------------------------------------------------------------


def test_veronese_body_document(tmp_path, capsys):
    code, out = cli(capsys, "run", write(tmp_path, VERONESE))
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "body"
    assert verts(doc) == [(0, 0), (0, 4), (1, 0)]
    assert doc["result"]["stabilized"] is True
    assert doc["provenance"]["library"] == "okbody"


def test_blp_body_document(tmp_path, capsys):
    sc = {"command": "body", "model": BLP, "divisor": "H", "flag": {"kind": "curve_class", "class": "H - E"}}
    code, out = cli(capsys, "body", write(tmp_path, sc))
    doc = json.loads(out)
    assert code == 0 and verts(doc) == [(0, 0), (0, 1), (1, 0)]
    assert doc["result"]["mu"] == "1"


def test_zariski_and_scan_documents(tmp_path, capsys):
    sc = {"command": "zariski", "model": BLP, "divisor": "H + 2E", "flag": {"kind": "curve_class", "class": "H - E"}}
    path = write(tmp_path, sc)
    code, out = cli(capsys, "zariski", path)
    doc = json.loads(out)["result"]
    assert code == 0 and doc["N"] == {"E": "2"} and doc["P_squared"] == "1"
    code, out = cli(capsys, "scan", path)
    assert code == 0 and json.loads(out)["result"]["mu"] == "1"


def test_semigroup_and_certify_documents(tmp_path, capsys):
    sc = dict(VERONESE, command="semigroup", options={"max_degree": 3})
    code, out = cli(capsys, "run", write(tmp_path, sc))
    res = json.loads(out)["result"]
    assert code == 0 and res["closed_under_addition"] is True
    code, out = cli(capsys, "certify", write(tmp_path, sc))
    res = json.loads(out)["result"]
    assert code == 0 and res["vertex_hit"] is True and res["generated_up_to"] == 3


def test_max_degree_override(tmp_path, capsys):
    code, out = cli(capsys, "body", write(tmp_path, VERONESE), "--max-degree", "3")
    assert code == 0 and json.loads(out)["result"]["max_degree"] == 3


def test_malformed_gram_row(tmp_path, capsys):
    model = dict(BLP, gram=[["1", "0"], ["0"]])
    sc = {"command": "body", "model": model, "divisor": "H", "flag": {"kind": "curve_class", "class": "H - E"}}
    code, out = cli(capsys, "run", write(tmp_path, sc))
    err = json.loads(out)["error"]
    assert code == 3 and err["path"] == "model.gram[1]"


@pytest.mark.parametrize("text", ["{not json", "[]", json.dumps({"command": "fly", "model": {"kind": "veronese"}})])
def test_parse_errors_exit_2(tmp_path, capsys, text):
    code, out = cli(capsys, "run", write(tmp_path, text))
    assert code == 2 and "error" in json.loads(out)


def test_computation_error_exits_4(tmp_path, capsys):
    sc = {"command": "zariski", "model": BLP, "divisor": "-H", "flag": {"kind": "curve_class", "class": "H - E"}}
    code, out = cli(capsys, "run", write(tmp_path, sc))
    assert code == 4 and "pseudo-effective" in json.loads(out)["error"]["message"]


def test_error_types():
    with pytest.raises(ScenarioParseError):
        parse_scenario(b"\xff")
    with pytest.raises(ModelError):
        parse_scenario(json.dumps({"command": "body", "model": {"kind": "curve", "c": -1}}))


def test_console_script(tmp_path):
    p = write(tmp_path, VERONESE)
    res = subprocess.run([sys.executable, "-m", "okbody", "body", p], capture_output=True, text=True)
    assert res.returncode == 0 and verts(json.loads(res.stdout)) == [(0, 0), (0, 4), (1, 0)]


# determinism -----------------------------------------------------------------------


def test_documents_are_byte_identical(tmp_path, capsys):
    p = write(tmp_path, VERONESE)
    first = cli(capsys, "run", p)[1]
    second = cli(capsys, "run", p)[1]
    assert first == second
    out = tmp_path / "o.json"
    main(["run", p, "--out", str(out)])
    assert out.read_text() == first


def test_scenario_hash_tracks_bytes():
    a = run(parse_scenario(json.dumps(VERONESE)))
    b = run(parse_scenario(json.dumps(VERONESE, indent=1)))
    assert a["result"] == b["result"]
    assert a["provenance"]["scenario_sha256"] != b["provenance"]["scenario_sha256"]


# verify-paper ----------------------------------------------------------------------


def test_verify_paper_passes(capsys):
    code, out = cli(capsys, "verify-paper")
    assert code == 0
    for anchor in ANCHORS:
        assert re.search(rf"^PASS\s+{anchor}\b", out, re.M)
    assert cli(capsys, "verify-paper")[1] == out


def _perturbed_corpus(tmp_path):
    dest = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), dest)
    golden = dest / "veronese-triangle.expected.json"
    golden.write_text(golden.read_text().replace('"4"', '"5"'))
    return dest


def test_verify_paper_negative_control(tmp_path, capsys):
    dest = _perturbed_corpus(tmp_path)
    code, out = cli(capsys, "verify-paper", "--corpus", str(dest))
    assert code == 1
    failing = re.findall(r"^FAIL\s+(\S+)", out, re.M)
    assert failing == ["example-triangle"]
    assert len(re.findall(r"^PASS\s", out, re.M)) == len(ANCHORS) - 1


def test_verify_paper_env_override(tmp_path, monkeypatch):
    dest = _perturbed_corpus(tmp_path)
    monkeypatch.setenv(CORPUS_ENV, str(dest))
    lines, ok = verify_paper()
    assert not ok and any(line.startswith("FAIL") and "example-triangle" in line for line in lines)


# plots ----------------------------------------------------------------------------


def veronese_body():
    return stabilized_body(VeroneseSurface(), conic_flag(), 6).polytope


def test_csv_rows_for_veronese_triangle():
    assert plot.to_csv(veronese_body()).splitlines() == ["0,0", "1,0", "0,4"]


def test_svg_shapes():
    svg = plot.to_svg(veronese_body())
    assert svg.count("<polygon") == 1
    points = re.search(r'points="([^"]+)"', svg).group(1).split()
    assert len(points) == 3
    seg = plot.to_svg(geometry.hull([(0, 0), (2, 1)]))
    assert "<polyline" in seg and "<polygon" not in seg


def test_blp_plot(tmp_path):
    m = SurfaceModel(["H", "E"], [[1, 0], [0, -1]], {"E": "E", "F": "H - E"})
    body = okounkov_body_surface(m, m.divisor("H"), m.divisor("H - E"))
    svg, table = plot.emit_plot(body, tmp_path / "b.svg")
    assert "<polygon" in svg.read_text()
    assert table.read_text().splitlines() == ["0,0", "1,0", "0,1"]


@pytest.mark.parametrize("verts_", [
    [(0, 0), (1, 0), (0, 4)],
    [(F(1, 3), 0), (2, F(5, 7)), (0, 3), (-1, F(1, 2))],
    [(0, 0), (F(3, 2), 1)],
    [(F(2, 9), F(-4, 5))],
])
def test_csv_round_trip(verts_):
    P = geometry.hull(verts_)
    assert plot.from_csv(plot.to_csv(P)) == P


def test_plot_rejects_other_dimensions():
    with pytest.raises(ComputationError):
        plot.to_svg(geometry.hull([(0,), (3,)]))
    with pytest.raises(ComputationError):
        plot.to_csv(geometry.simplex(3, 1))


def test_plot_command(tmp_path, capsys):
    out = tmp_path / "tri.svg"
    code, text = cli(capsys, "plot", write(tmp_path, VERONESE), "--out", str(out))
    assert code == 0 and out.exists()
    assert Path(json.loads(text)["csv"]).read_text().splitlines() == ["0,0", "1,0", "0,4"]
    code, text = cli(capsys, "body", write(tmp_path, VERONESE), "--format", "csv")
    assert code == 0 and text.splitlines() == ["0,0", "1,0", "0,4"]
