import json

import pytest

from primspec.cli import main

FIX_B = {"n": 3, "mode": "rational", "generators": [[[0, "1/2", "1/2"], [0, 1, 0], [0, 0, 1]]]}


@pytest.fixture
def fix_b_file(tmp_path):
    path = tmp_path / "fixb.json"
    path.write_text(json.dumps(FIX_B))
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_fix_b(fix_b_file, tmp_path, capsys):
    out, dot = tmp_path / "r.json", tmp_path / "p.dot"
    code, _, _ = run(["analyze", fix_b_file, "--out", out, "--dot", dot], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["report_version"] == 1
    assert [p["support"] for p in rep["prim"]] == [[1], [2]]
    assert rep["center"] == [1, 2] and rep["radical_of_zero"] == [1, 2]
    assert rep["verdict"]["mean_ergodic"] is True
    assert rep["projection"][0] == ["0", "1/2", "1/2"]
    assert dot.read_text().startswith("digraph")


def test_analyze_is_reproducible_in_rational_mode(fix_b_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["analyze", fix_b_file, "--out", a], capsys)
    run(["analyze", fix_b_file, "--out", b], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_analyze_single_point(tmp_path, capsys):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"n": 1, "generators": [[[1]]]}))
    code, out, _ = run(["analyze", path], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["prim"][0]["support"] == [0] and rep["center"] == [0]


def test_build_rotation_then_analyze(tmp_path, capsys):
    path = tmp_path / "rot.json"
    assert run(["build", "rotation", "--n", 6, "--a", 2, "--out", path], capsys)[0] == 0
    code, out, _ = run(["analyze", path], capsys)
    assert code == 0 and len(json.loads(out)["prim"]) == 2


def test_radical_examples(fix_b_file, tmp_path, capsys):
    csv = tmp_path / "t.csv"
    code, out, _ = run(["radical", fix_b_file, "--set", "0,1,2", "--exact",
                        "--trace-until", 64, "--csv", csv], capsys)
    res = json.loads(out)
    assert code == 0 and res["radical_support"] == [1, 2] and res["member"]
    assert csv.read_text().splitlines()[:3] == ["N,decay", "1,1", "2,1/2"]
    code, out, _ = run(["radical", fix_b_file, "--set", "1"], capsys)
    assert json.loads(out)["radical_support"] == [1]


def test_radical_open_set_is_input_error(fix_b_file, capsys):
    code, _, err = run(["radical", fix_b_file, "--set", "0"], capsys)
    assert code == 2 and "0->1" in err


def test_center_and_meanergodic(fix_b_file, capsys):
    code, out, _ = run(["center", fix_b_file], capsys)
    assert code == 0 and json.loads(out)["center"] == [1, 2]
    code, out, _ = run(["meanergodic", fix_b_file, "--mode", "float"], capsys)
    assert code == 0 and json.loads(out)["mean_ergodic"] is True


def test_builders(tmp_path, capsys):
    for argv in (["koopman", "--map", "1,2,3,2"], ["ulam", "--cells", 8],
                 ["random", "--seed", 3, "--mode", "rational"]):
        code, out, _ = run(["build", *argv], capsys)
        assert code == 0 and "generators" in json.loads(out)
    left = tmp_path / "l.json"
    run(["build", "rotation", "--n", 2, "--a", 1, "--out", left], capsys)
    code, out, _ = run(["build", "product", left, left], capsys)
    assert code == 0 and json.loads(out)["n"] == 4


def test_exit_codes(tmp_path, fix_b_file, capsys):
    assert run(["nonsense"], capsys)[0] == 1
    assert run(["radical", fix_b_file], capsys)[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2,')
    code, _, err = run(["analyze", bad], capsys)
    assert code == 2 and "bad.json:1:" in err
    ns = tmp_path / "ns.json"
    ns.write_text(json.dumps({"n": 2, "generators": [[[0, 1], [1, 0]], [[1, 0], [0.5, 0.5]]]}))
    assert run(["analyze", ns], capsys)[0] == 2
    assert run(["build", "koopman", "--map", "a,b"], capsys)[0] == 2


def test_numeric_failure_exit_code(fix_b_file, capsys, monkeypatch):
    from primspec import cli
    from primspec.errors import NotConverged

    def boom(*a, **k):
        raise NotConverged("forced")
    monkeypatch.setattr(cli, "mean_ergodicity_verdict", boom)
    assert run(["meanergodic", fix_b_file], capsys)[0] == 3


def test_verify_fixtures_only(tmp_path, capsys):
    out = tmp_path / "suite.json"
    code, text, _ = run(["verify", "--count", 0, "--out", out], capsys)
    assert code == 0 and "FAIL" not in text
    assert all(r["passed"] for r in json.loads(out.read_text())["reports"])


def test_verify_corrupted_fixture(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert run(["verify", "--count", 0, "--fixtures", bad], capsys)[0] == 2
