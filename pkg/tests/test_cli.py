import json

import pytest

from logbm.cli import EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_PASS, main
from logbm.geom_core import body_from_json


@pytest.fixture
def bodies(tmp_path):
    paths = {}
    for name, args in {
        "c2": ["cube", "--dim", "2"],
        "k": ["sym-vpoly", "--dim", "2", "--m", "4", "--seed", "3"],
        "t1": ["triangle-centroid", "--seed", "1"],
        "t2": ["triangle-centroid", "--seed", "2"],
        "flow": ["vertex-flow", "--dim", "2", "--m", "6", "--seed", "1"],
    }.items():
        p = tmp_path / f"{name}.json"
        assert main(["gen", *args, "--out", str(p)]) == EXIT_PASS
        paths[name] = str(p)
    return paths


def test_gen_prints_summary(tmp_path, capsys):
    assert main(["gen", "cube", "--dim", "3", "--out", str(tmp_path / "c.json")]) == EXIT_PASS
    err = capsys.readouterr().err
    assert "n=3" in err and "vertices=8" in err and "facets=6" in err
    assert body_from_json(json.loads((tmp_path / "c.json").read_text())).dim == 3


@pytest.mark.parametrize("kind", ["cross", "ball-polygon", "strip-box", "sym-hpoly", "unconditional"])
def test_gen_catalog(kind, tmp_path):
    assert main(["gen", kind, "--dim", "2", "--out", str(tmp_path / "b.json")]) == EXIT_PASS


def test_check_commands(bodies, tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "log-bm", "--k", bodies["c2"], "--l", bodies["k"], "--lambda", "0.3",
                 "--out", str(out)]) == EXIT_PASS
    assert json.loads(out.read_text())["pass"] is True
    assert main(["check", "dual-log-bm", "--k", bodies["t1"], "--l", bodies["t2"]]) == EXIT_PASS
    assert main(["check", "triangle-logbm", "--k", bodies["t1"], "--l", bodies["t2"]]) == EXIT_PASS
    assert main(["check", "dual-quermass", "--k", bodies["t1"], "--l", bodies["k"], "--p", "0"]) == EXIT_PASS
    assert main(["check", "simplex-lower-bound", "--flow", bodies["flow"], "--r", "0.2"]) == EXIT_PASS
    assert main(["check", "moment-gap", "--k", bodies["c2"], "--l", "ball", "--samples", "20000"]) == EXIT_PASS


def test_check_fail_exit_code(bodies):
    # a deliberately impossible tolerance turns a tight equality into a failure
    code = main(["check", "gaussian-dilates", "--body", bodies["c2"], "--alpha", "1", "--beta", "1",
                 "--tol", "-1"])
    assert code == EXIT_FAIL


def test_scan_writes_csv(bodies, tmp_path):
    out = tmp_path / "s.json"
    assert main(["scan", "dual-b", "--flow", bodies["flow"], "--out", str(out)]) == EXIT_PASS
    assert (tmp_path / "s.csv").read_text().startswith("t,value,log_value,second_diff")
    assert main(["scan", "strip-b", "--body", bodies["c2"], "--a", "0.5", "--u", "1,1"]) == EXIT_PASS
    assert main(["scan", "dual-family", "--k", bodies["c2"], "--l", "ball", "--p", "2"]) == EXIT_PASS


def test_input_errors(bodies, tmp_path):
    assert main(["check", "log-bm", "--k", str(tmp_path / "missing.json"), "--l", bodies["k"]]) == EXIT_INPUT
    assert main(["check", "log-bm", "--k", bodies["c2"], "--l", bodies["k"], "--lambda", "2"]) == EXIT_INPUT
    assert main(["check", "log-bm", "--k", bodies["t1"], "--l", bodies["k"]]) == EXIT_INPUT
    assert main(["check", "no-such-check"]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", "dual-log-bm", "--k", str(bad), "--l", bodies["k"]]) == EXIT_INPUT


def test_numerical_failure_exit_code(bodies):
    # a tiny Gaussian sample leaves no usable scan window
    code = main(["scan", "b", "--body", bodies["c2"], "--density", "gaussian", "--sigma", "50",
                 "--method", "indicator", "--samples", "10", "--t-min", "-5", "--t-max", "-4"])
    assert code == EXIT_NUMERIC


def test_hunt_and_replay(tmp_path):
    out = tmp_path / "h.json"
    assert main(["hunt", "--check", "dual-log-bm", "--dim", "2", "--trials", "4", "--seed", "5",
                 "--out", str(out)]) == EXIT_PASS
    res = json.loads(out.read_text())
    rep = res["worst"][0]["report"]
    inst = rep["params"]["instance"]
    (tmp_path / "K.json").write_text(json.dumps(inst["K"]))
    (tmp_path / "L.json").write_text(json.dumps(inst["L"]))
    replay = tmp_path / "replay.json"
    main(["check", "dual-log-bm", "--k", str(tmp_path / "K.json"), "--l", str(tmp_path / "L.json"),
          "--lambda", repr(inst["lambda"]), "--out", str(replay)])
    assert json.loads(replay.read_text())["margin"] == rep["margin"]


def test_report_merge(bodies, tmp_path):
    a, b, m = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "m.json"
    main(["check", "dual-log-bm", "--k", bodies["t1"], "--l", bodies["t2"], "--out", str(a)])
    main(["check", "triangle-logbm", "--k", bodies["t1"], "--l", bodies["t2"], "--out", str(b)])
    assert main(["report", "merge", str(a), str(b), "--out", str(m)]) == EXIT_PASS
    assert [r["check_name"] for r in json.loads(m.read_text())] == ["dual-log-bm", "triangle-logbm"]
