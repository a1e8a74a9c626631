import json
import os

import pytest

from enriched_ph.cli import main

FIXTURE_B = {
    "dataset": {
        "domain": ["x1", "x2", "x3"],
        "measurements": {"phi1": ["2", "2", "3"], "phi2": ["2", "2", "2"], "phi3": ["1", "2", "2"]},
    },
    "M": {
        "id": {"x1": "x1", "x2": "x2", "x3": "x3"},
        "g1": {"x1": "x2", "x2": "x2", "x3": "x3"},
        "g2": {"x1": "x2", "x2": "x2", "x3": "x2"},
        "g3": {"x1": "x1", "x2": "x2", "x3": "x2"},
    },
}

FIXTURE_A_BOTH = {
    "domain": ["x1", "x2", "x3", "x4"],
    "measurements": {"phi": ["-1", "0", "0", "1"], "psi": ["0", "1", "-1", "0"]},
}

FIXTURE_C_LEFT = {"domain": ["x1", "x2"], "measurements": {"one": ["1", "1"], "two": ["2", "2"]}}
FIXTURE_C_RIGHT = {"domain": ["x1", "x2"], "measurements": {"neg": ["-1", "-1"], "pos": ["1", "1"]}}


@pytest.fixture
def files(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return tmp_path, write


def test_metric_fixture_a(files, capsys):
    tmp, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    assert main(["metric", path]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == ",x1,x2,x3,x4"
    assert lines[2] == "x2,1,0,2,1"


def test_metric_single_point(files, capsys):
    tmp, write = files
    path = write("one.json", {"domain": ["p"], "measurements": {"f": ["7"]}})
    assert main(["metric", path]) == 0
    assert capsys.readouterr().out.strip().splitlines()[1] == "p,0"


def test_metric_malformed_json(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["metric", str(bad)]) == 2


def test_metric_deterministic(files, tmp_path):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["metric", path, "-o", str(out1)]) == 0
    assert main(["metric", path, "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_analyze_fixture_b(files, capsys):
    _, write = files
    path = write("b.json", FIXTURE_B)
    assert main(["analyze", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {
        "kind": "monoid",
        "blocks": [["phi1", "phi2", "phi3"]],
        "basis": ["phi1", "phi3"],
        "dimension": 2,
    }


def test_analyze_identity_only(files, capsys):
    _, write = files
    payload = {
        "dataset": FIXTURE_A_BOTH,
        "M": {"id": {"x1": "x1", "x2": "x2", "x3": "x3", "x4": "x4"}},
    }
    path = write("ida.json", payload)
    assert main(["analyze", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["dimension"] == 2
    assert report["kind"] == "group"


def test_analyze_bad_operation_exit_3(files, capsys):
    _, write = files
    payload = {
        "dataset": FIXTURE_A_BOTH,
        "M": {"swap": {"x1": "x4", "x2": "x2", "x3": "x3", "x4": "x1"}},
    }
    path = write("bad.json", payload)
    assert main(["analyze", path]) == 3
    assert FIXTURE_A_BOTH["measurements"].keys() & set(capsys.readouterr().err.split())


def test_ops_end(files, capsys):
    _, write = files
    path = write("b.json", FIXTURE_B["dataset"])
    assert main(["ops", "end", path]) == 0
    found = json.loads(capsys.readouterr().out)
    assert len(found) == 4


def test_ph_grid_golden(files, tmp_path, capsys):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    out = tmp_path / "grid.json"
    assert main(["ph", path, "-m", "phi", "-d", "1", "--grid", str(out)]) == 0
    grid = json.loads(out.read_text())
    assert grid["r"] == ["0", "1", "2"]
    assert grid["s"] == ["-2", "-1", "0", "1"]
    assert grid["dims"] == [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]


def test_ph_unknown_measurement(files):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    assert main(["ph", path, "-m", "zeta"]) == 2


def test_ph_single_point_bar(files, capsys, tmp_path):
    _, write = files
    path = write("one.json", {"domain": ["p"], "measurements": {"f": ["7"]}})
    out = tmp_path / "bars.csv"
    assert main(["ph", path, "-m", "f", "-d", "0", "--barcodes", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "r,s_birth,s_death,degree"
    assert lines[1] == "0,7,inf,0"


def test_ph_functor_writes_twelve_edge_files(files, tmp_path):
    _, write = files
    path = write("b.json", FIXTURE_B)
    outdir = tmp_path / "functor"
    assert main(["ph", path, "-m", "phi1", "-d", "0", "--functor", str(outdir)]) == 0
    edge_files = [f for f in os.listdir(outdir) if f.startswith("edge_")]
    assert len(edge_files) == 12
    index = json.loads((outdir / "index.json").read_text())
    assert len(index["edges"]) == 12


def test_ph_dot_output(files, tmp_path):
    _, write = files
    path = write("b.json", FIXTURE_B)
    out = tmp_path / "g.dot"
    assert main(["ph", path, "-m", "phi1", "--dot", str(out)]) == 0
    assert out.read_text().count("->") == 12


def test_interleave_identity(files, capsys):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    assert main(["interleave", path, "--phi", "phi", "--psi", "phi"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["upper"] == "0" and report["lower"] == "0"


def test_interleave_fixture_a(files, capsys):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    assert main(["interleave", path, "--phi", "phi", "--psi", "psi", "-d", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["upper"] == "1"
    from fractions import Fraction

    assert Fraction(report["lower"]) <= Fraction(report["upper"])


def test_interleave_missing_measurement(files):
    _, write = files
    path = write("psi.json", FIXTURE_A_BOTH)
    assert main(["interleave", path, "--phi", "phi", "--psi", "nope"]) == 2


def test_seo_check_identity(files, capsys):
    _, write = files
    inc = write("b.json", FIXTURE_B)
    seo = write(
        "seo.json",
        {
            "alpha": {"phi1": "phi1", "phi2": "phi2", "phi3": "phi3"},
            "T": {"id": "id", "g1": "g1", "g2": "g2", "g3": "g3"},
        },
    )
    assert main(["seo", "check", "--source", inc, "--target", inc, "--seo", seo]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["valid"] and report["monoid_operator"] and report["geometric"]


def test_seo_check_rejects_swap_with_witness(files, capsys):
    _, write = files
    inc = write("b.json", FIXTURE_B)
    seo = write(
        "seo.json",
        {
            "alpha": {"phi1": "phi3", "phi2": "phi2", "phi3": "phi1"},
            "T": {"id": "id", "g1": "g1", "g2": "g2", "g3": "g3"},
        },
    )
    assert main(["seo", "check", "--source", inc, "--target", inc, "--seo", seo]) == 4
    report = json.loads(capsys.readouterr().out)
    assert not report["valid"]
    assert report["witness"]["operation"] in {"g1", "g3"}


def test_seo_realize_fixture_c(files, capsys):
    _, write = files
    left = write("left.json", FIXTURE_C_LEFT)
    right = write("right.json", FIXTURE_C_RIGHT)
    alpha = write("alpha.json", {"one": "neg", "two": "pos"})
    assert main(["seo", "realize", "--source", left, "--target", right, "--alpha", alpha]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {"realizable": False, "empty_candidates_at": ["x1", "x2"]}


def test_seo_realize_positive(files, capsys):
    _, write = files
    left = write("left.json", FIXTURE_C_LEFT)
    alpha = write("alpha.json", {"one": "one", "two": "two"})
    assert main(["seo", "realize", "--source", left, "--target", left, "--alpha", alpha]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["realizable"]


def test_seo_extend_round_trip(files, capsys):
    _, write = files
    inc = write("b.json", FIXTURE_B)
    ext = write(
        "ext.json",
        {
            "basis": ["phi1", "phi3"],
            "alpha_bar": {"phi1": "phi2", "phi3": "phi3"},
            "T": {"id": "id", "g1": "g1", "g2": "g2", "g3": "g3"},
            "variant": "MEO",
        },
    )
    assert main(["seo", "extend", "--source", inc, "--target", inc, "--map", ext]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["extended"]
    assert report["seo"]["alpha"] == {"phi1": "phi2", "phi2": "phi2", "phi3": "phi3"}


def test_seo_extend_swap_exit_4(files, capsys):
    _, write = files
    inc = write("b.json", FIXTURE_B)
    ext = write(
        "ext.json",
        {
            "basis": ["phi1", "phi3"],
            "alpha_bar": {"phi1": "phi3", "phi3": "phi1"},
            "T": {"id": "id", "g1": "g1", "g2": "g2", "g3": "g3"},
            "variant": "MEO",
        },
    )
    assert main(["seo", "extend", "--source", inc, "--target", inc, "--map", ext]) == 4


def test_seo_decompose_fixture_a(files, capsys):
    _, write = files
    payload = {
        "dataset": FIXTURE_A_BOTH,
        "M": {"id": {"x1": "x1", "x2": "x2", "x3": "x3", "x4": "x4"}},
    }
    path = write("ida.json", payload)
    assert main(["seo", "decompose", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["isomorphism"]
    assert len(report["diagonal"]["dataset"]["domain"]) == 8


def test_seo_units_clamp(files, capsys):
    _, write = files
    payload = {"dataset": FIXTURE_C_LEFT, "M": {"id": {"x1": "x1", "x2": "x2"}}}
    inc = write("c.json", payload)
    vm = write("vm.json", {"builtin": "clamp-sign"})
    assert main(["seo", "units", "--valuemap", vm, "--incarnation", inc]) == 0
    report = json.loads(capsys.readouterr().out)
    assert list(report["image"]["dataset"]["measurements"].values()) == [["1", "1"]]


def test_ops_guard_env_override(files, monkeypatch):
    _, write = files
    path = write("c.json", FIXTURE_C_LEFT)
    monkeypatch.setenv("ENRICHED_PH_GUARD", "1")
    assert main(["ops", "end", path]) == 2
    monkeypatch.setenv("ENRICHED_PH_GUARD", "2")
    assert main(["ops", "end", path]) == 0
    monkeypatch.setenv("ENRICHED_PH_GUARD", "zap")
    assert main(["ops", "end", path]) == 2
