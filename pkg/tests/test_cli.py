import json
import subprocess
import sys

import pytest

from ainf.cli import Elements, Workspace, save
from ainf.cli.main import main
from ainf.cli.workspace import dumps, load, loads
from ainf.core import Coderivation, complexes_category, scaling_functor, strict_functor
from ainf.exactlin import QQ
from ainf.fixtures import FIXTURES
from ainf.hom import TransformationChain, apply_B
from ainf.unital import element, find_unit_elements


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def json_part(text):
    return json.loads(text.split("--- json ---\n", 1)[1])


@pytest.fixture
def fixtures_file(tmp_path):
    path = tmp_path / "fx.json"
    assert main(["fixtures", "emit", *FIXTURES, "--out", str(path)]) == 0
    return path


@pytest.fixture
def instance_file(tmp_path):
    """TwoComplexes with a scaling functor, a natural r: id -> S and invertible elements."""
    C = FIXTURES["TwoComplexes"]()
    i0 = find_unit_elements(C)
    weights = {"X": 1, "Y": 2}
    S = scaling_functor(C, weights, "S")
    ws = Workspace(QQ, 3)
    ws.categories["TwoComplexes"] = C
    ws.functors["S"] = S
    ws.coderivations["r"] = Coderivation(
        C.identity(), S, -1, {(x,): i0[x].scale(weights[x]) for x in C.objects}, None
    )
    ws.coderivations["z"] = Coderivation(C.identity(), S, -1, {}, None)
    O = complexes_category({"X": [("x0", 0)]}, {}, name="OnlyX")
    ws.categories["OnlyX"] = O
    ws.functors["incl"] = strict_functor(O, C, {"X": "X"}, {"x0>x0": {"x0>x0": 1}}, "incl")
    yx = C.hom("Y", "X")
    ws.elements["r0"] = Elements("TwoComplexes", -1, {
        "X": (("X", "X"), i0["X"]),
        "Y": (("Y", "X"), element(C, "Y", "X", {yx.index("y0b>x0"): 1}, -1)),
    })
    path = tmp_path / "ws.json"
    save(ws, str(path))
    return path


# -------------------------------------------------------------- round trip


def test_fixture_emission_is_byte_stable(tmp_path, capsys):
    code1, first, _ = run(capsys, "fixtures", "emit", *FIXTURES)
    code2, second, _ = run(capsys, "fixtures", "emit", *FIXTURES)
    assert code1 == code2 == 0
    assert first == second
    assert dumps(loads(first)) == first


def test_pipeline_is_byte_stable(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        assert main(["fixtures", "emit", *FIXTURES, "--out", str(path)]) == 0
        capsys.readouterr()
        code, out, _ = run(capsys, "check", "stasheff", "--max-arity", 4, path)
        assert code == 1  # BrokenDual is among the fixtures
        outs.append((path.read_bytes(), out))
    assert outs[0] == outs[1]


def test_constructed_workspace_round_trips(instance_file, tmp_path, capsys):
    out = tmp_path / "units.json"
    code, _, _ = run(capsys, "construct", "units", "--cat", "TwoComplexes", "--out", out, instance_file)
    assert code == 0
    text = out.read_text()
    assert dumps(loads(text)) == text
    ws = load(str(out))
    assert "i_TwoComplexes" in ws.coderivations
    code, _, _ = run(capsys, "check", "B-squared", "--trans", "i_TwoComplexes", out)
    assert code == 0


def test_minimal_workspace(tmp_path, capsys):
    path = tmp_path / "min.json"
    path.write_text(json.dumps({
        "format": "ainf-workspace", "version": 1,
        "categories": {"Pt": {"objects": ["o"], "homs": []}},
    }))
    for check in ("stasheff", "unit-element"):
        code, _, _ = run(capsys, "check", check, path)
        assert code == 0
    code, _, _ = run(capsys, "check", "functor", "--fun", "id_Pt", path)
    assert code == 0


# --------------------------------------------------------------- checks


def test_check_stasheff_dual(fixtures_file, capsys):
    code, out, _ = run(capsys, "check", "stasheff", "--cat", "Dual", "--max-arity", 6, fixtures_file)
    assert code == 0
    assert json_part(out)["reports"][0]["verdict"] == "pass"


def test_check_stasheff_broken_dual_reports_arity_3(fixtures_file, capsys):
    code, out, _ = run(capsys, "check", "stasheff", "--cat", "BrokenDual", fixtures_file)
    assert code == 1
    data = json_part(out)
    fails = data["reports"][0]["failures"]
    assert {f["arity"] for f in fails} == {3}
    assert "defect at arity 3" in out


def test_check_identity_functor(fixtures_file, capsys):
    code, _, _ = run(capsys, "check", "functor", "--fun", "id_Dual", fixtures_file)
    assert code == 0


def test_check_unit_element_and_unital_functor(instance_file, capsys):
    assert run(capsys, "check", "unit-element", "--cat", "TwoComplexes", instance_file)[0] == 0
    assert run(capsys, "check", "unital-functor", "--fun", "S", instance_file)[0] == 0
    assert run(capsys, "check", "unital-functor", "--fun", "incl", instance_file)[0] == 0


def test_check_M_identities(instance_file, capsys):
    code, _, _ = run(capsys, "check", "M-identities", "--trans", "r|S", instance_file)
    assert code == 0


# ------------------------------------------------------------ constructions


def test_construct_h0(fixtures_file, capsys):
    code, out, _ = run(capsys, "construct", "h0", "--cat", "TwoComplexes", fixtures_file)
    assert code == 0
    h = json_part(out)["outputs"]["h0"]
    assert h["homs"] == {"X->X": ["[x0>x0]"], "X->Y": ["[x0>y0b]"], "Y->X": ["[y0b>x0]"], "Y->Y": ["[y0b>y0b]"]}
    assert h["identities"] == {"X": {"[x0>x0]": "1"}, "Y": {"[y0b>y0b]": "1"}}
    assert len(h["composition"]) == 8
    assert all(list(e["result"].values()) == ["1"] for e in h["composition"])


def test_construct_compose_B_matches_library(instance_file, tmp_path, capsys):
    out = tmp_path / "b.json"
    code, _, _ = run(capsys, "construct", "compose-B", "--chain", "r", "--out", out, instance_file)
    assert code == 0
    ws = load(str(out))
    got = ws.coderivation("B(r)")
    ref = apply_B(TransformationChain.of(load(str(instance_file)).coderivation("r")), 3)
    for k in range(4):
        for seq in got.source.quiver.paths(k):
            assert got.component_or_zero(seq).rows == ref.component_or_zero(seq).rows


def test_construct_invert(instance_file, tmp_path, capsys):
    out = tmp_path / "inv.json"
    code, text, _ = run(capsys, "construct", "invert", "--trans", "r", "--out", out, instance_file)
    assert code == 0, text
    assert {"r_inv", "r_w", "r_t"} <= set(load(str(out)).coderivations)


def test_construct_quasi_inverse(instance_file, capsys):
    code, text, _ = run(
        capsys, "construct", "quasi-inverse", "--fun", "S", "--object-map", "X=X,Y=X",
        "--elements", "r0", instance_file,
    )
    assert code == 0, text
    assert set(json_part(text)["outputs"]["coderivations"]) >= {"r2", "p", "t", "q", "i_C", "v_C"}


def test_construct_cancel(instance_file, tmp_path, capsys):
    code, _, _ = run(capsys, "construct", "cancel", "--fun", "id_TwoComplexes", "--trans", "r",
                     "--source", "id_TwoComplexes", "--target", "S", instance_file)
    assert code == 0


def test_failed_construction_exits_1(instance_file, capsys):
    code, text, _ = run(capsys, "construct", "invert", "--trans", "z", instance_file)
    assert code == 1
    assert "no inverse" in json_part(text)["error"]


def test_mismatched_elements_exit_2(instance_file, capsys):
    # r0 sends Y to X, so it cannot be a quasi-inverse datum for h = identity
    code, text, err = run(
        capsys, "construct", "quasi-inverse", "--fun", "S", "--object-map", "X=X,Y=Y",
        "--elements", "r0", instance_file,
    )
    assert code == 2 and "r0" in err


# ---------------------------------------------------------------- errors


def test_missing_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "check", "stasheff", tmp_path / "nope.json")
    assert code == 2 and "nope.json" in err


def test_malformed_json_names_the_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "format": "ainf-workspace",\n  "version": 1,\n  oops\n}\n')
    code, _, err = run(capsys, "check", "stasheff", path)
    assert code == 2 and "line 4" in err


def test_unknown_name_exits_2(fixtures_file, capsys):
    code, _, err = run(capsys, "check", "stasheff", "--cat", "Nope", fixtures_file)
    assert code == 2 and "Nope" in err


def test_inhomogeneous_block_rejected(fixtures_file, capsys):
    data = json.loads(fixtures_file.read_text())
    data["categories"]["Dual"]["b"][0]["target_degree"] = 0
    fixtures_file.write_text(json.dumps(data))
    code, _, err = run(capsys, "check", "stasheff", fixtures_file)
    assert code == 2 and "homogeneous" in err


def test_wrong_block_shape_rejected(fixtures_file, capsys):
    data = json.loads(fixtures_file.read_text())
    data["categories"]["Dual"]["b"][0]["matrix"].pop()
    fixtures_file.write_text(json.dumps(data))
    code, _, err = run(capsys, "check", "stasheff", fixtures_file)
    assert code == 2 and "categories.Dual.b[0]" in err


def test_bad_usage_exits_2(fixtures_file, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "nonsense", str(fixtures_file)])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "construct", "compose-B", fixtures_file)
    assert code == 2


def test_entry_point_exit_codes(fixtures_file):
    def status(*args):
        return subprocess.run([sys.executable, "-m", "ainf.cli.main", *map(str, args)],
                              capture_output=True, text=True).returncode

    assert status("check", "stasheff", "--cat", "Dual", fixtures_file) == 0
    assert status("check", "stasheff", "--cat", "BrokenDual", fixtures_file) == 1
    assert status("check", "stasheff", "--cat", "Missing", fixtures_file) == 2


def test_prime_field_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("AINF_FIELD", "7")
    path = tmp_path / "f7.json"
    assert main(["fixtures", "emit", "BrokenDual", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["field"] == "7"
    code, out, _ = run(capsys, "check", "stasheff", path)
    assert code == 1
