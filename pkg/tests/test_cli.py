from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cohesio.cli import main
from cohesio.fincat import builtin_site
from cohesio.formats import functor_to_doc, presheaf_to_doc, write_json
from cohesio.morphisms import collapse_functor, inclusion_functor
from cohesio.presheaf import yoneda
from cohesio.samples import group_nerve, path_graph


def run(capsys, *argv):
    status = main(list(argv))
    cap = capsys.readouterr()
    out = json.loads(cap.out) if cap.out else None
    err = json.loads(cap.err.strip().splitlines()[-1]) if cap.err.strip() else None
    return status, out, err


@pytest.fixture
def files(tmp_path):
    C = builtin_site("delta1")
    paths = {}
    for name, X in [("path3", path_graph(C, 3)), ("path2", path_graph(C, 2)), ("edge", yoneda(C, "[1]"))]:
        paths[name] = tmp_path / f"{name}.json"
        write_json(paths[name], presheaf_to_doc(X))
    paths["nerve"] = tmp_path / "nerve.json"
    write_json(paths["nerve"], presheaf_to_doc(group_nerve(builtin_site("delta:2"), 2)))
    paths["incl"] = tmp_path / "incl.json"
    write_json(paths["incl"], functor_to_doc(inclusion_functor(C, builtin_site("delta:2"))))
    paths["collapse"] = tmp_path / "collapse.json"
    write_json(paths["collapse"], functor_to_doc(collapse_functor(C, builtin_site("terminal"))))
    paths["dir"] = tmp_path / "objects"
    paths["dir"].mkdir()
    write_json(paths["dir"] / "edge.json", presheaf_to_doc(yoneda(C, "[1]")))
    return paths


def test_classify(capsys):
    status, out, _ = run(capsys, "site", "classify", "--builtin", "delta1")
    assert status == 0 and out["pre_cohesive"] and out["sufficiently_cohesive"]
    assert out["options"]["budget"] > 0


def test_bound_on_path(capsys, files):
    status, out, _ = run(capsys, "homotopy", "bound", "--site", "delta1", "--object", str(files["path3"]))
    assert status == 0 and out["weakly_kan_bound"] == 3


def test_navigability_exit_codes(capsys, files):
    status, out, _ = run(capsys, "homotopy", "navigable", "--site", "delta1", "--object", str(files["path2"]))
    assert status == 2 and not out["navigable"]
    status, out, _ = run(capsys, "homotopy", "navigable", "--object", str(files["nerve"]))
    assert status == 0 and out["navigable"]


def test_kan_exit_codes(capsys, files):
    status, out, _ = run(capsys, "homotopy", "kan", "--object", str(files["nerve"]))
    assert status == 0 and out["kan"]


def test_interior_command(capsys):
    status, out, _ = run(capsys, "realize", "interior", "--simplex", "2", "--point", "0,1/2")
    assert status == 0 and out["interior"] is False
    status, out, _ = run(capsys, "realize", "interior", "--simplex", "2", "--point", "1/3,2/3")
    assert out["interior"] is True


def test_certify_and_grid(capsys):
    status, out, _ = run(capsys, "realize", "certify", "--endpoints")
    assert status == 2 and out["failing_object"] == "[1]"
    status, out, _ = run(capsys, "realize", "certify", "--cube", "2")
    assert status == 0
    status, out, _ = run(capsys, "realize", "grid", "--simplex", "2", "--grid-step", "4", "--jobs", "2")
    assert status == 0 and out["agree"]


def test_realize_point_command(capsys, files):
    status, out, _ = run(capsys, "realize", "point", "--site", "delta1", "--object", str(files["edge"]),
                         "--degree", "1", "--element", "[1]->[1]:11", "--point", "1/2")
    assert status == 0 and out["degree"] == 0 and out["simplex"] == "[0]->[1]:1"


def test_morphism_analyze(capsys, files):
    status, out, _ = run(capsys, "morphism", "analyze", "--functor", str(files["incl"]))
    assert status == 0 and out["preserves_pieces"]
    status, out, _ = run(capsys, "morphism", "analyze", "--functor", str(files["collapse"]),
                         "--tests", str(files["dir"]))
    assert status == 2 and not out["lambda_iso"]


def test_errors_are_json(capsys, files):
    status, _, err = run(capsys, "site", "classify", "--builtin", "nope")
    assert status == 1 and err["error"]["code"] == "invalid_category"
    status, _, err = run(capsys, "realize", "interior", "--simplex", "2", "--point", "1/2,x")
    assert status == 1 and err["error"]["code"] == "malformed_point"
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"]["code"] == "usage_error"


def test_schema_error_carries_pointer(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"site": "delta1", "sections": {"[0]": ["a"]}, "action": {}}))
    status, _, err = run(capsys, "presheaf", "info", "--object", str(bad))
    assert status == 1 and err["error"]["pointer"] == "/sections/[1]"


def test_budget_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("COHESIO_BUDGET", "5")
    status, _, err = run(capsys, "presheaf", "omega", "--builtin", "delta:2")
    assert status == 1 and err["error"]["code"] == "budget_exceeded"
    status, out, _ = run(capsys, "presheaf", "omega", "--builtin", "delta:2", "--budget", "100000")
    assert status == 0 and out["sections"] == {"[0]": 2, "[1]": 5, "[2]": 19}
    assert out["options"]["budget"] == 100000


def test_reports_are_deterministic(capsys, files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        main(["homotopy", "report", "--site", "delta1", "--object", str(files["path3"]), "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cohesio.cli", "site", "classify", "--builtin", "terminal"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["quality_type"] is True
