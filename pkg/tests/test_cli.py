import json

import pytest

import oracles
from conngames import domain_to_dict, validate, domain_from_dict
from conngames.cli import main


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "path4": write_json(tmp_path / "path4.json", domain_to_dict(oracles.path4())),
        "cycle4": write_json(tmp_path / "cycle4.json", domain_to_dict(oracles.cycle4())),
        "degenerate": write_json(tmp_path / "deg.json",
                                 domain_to_dict(oracles.adjacent_primaries_domain())),
        "invalid": write_json(tmp_path / "bad.json",
                              {"vertices": 2, "edges": [[0, 0]], "primary": [0],
                               "backbone": [], "standard": [1]}),
        "half": write_json(tmp_path / "half.json", {"imputation": ["1/2", "1/2"]}),
        "setcover": write_json(tmp_path / "sc.json",
                               {"universe": 5,
                                "sets": [[0, 2], [0, 1, 2], [2, 4], [2, 3, 4]]}),
        "k3": write_json(tmp_path / "k3.json",
                         {"vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]], "t": 2}),
        "tmp": tmp_path,
    }


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_indices_auto_tree(files, capsys):
    code, out, _ = run(capsys, ["indices", files["path4"], "--index", "shapley"])
    assert code == 0
    assert "tree-closed-form" in out
    assert "1/2" in out


def test_indices_exact_cycle(files, capsys):
    code, out, _ = run(capsys, ["indices", files["cycle4"], "--index", "banzhaf",
                                "--method", "exact"])
    assert code == 0
    assert "exact-enumeration" in out
    assert out.count("1/2") == 2


def test_indices_mc_within_tolerance_and_deterministic(files, capsys):
    argv = ["indices", files["cycle4"], "--index", "banzhaf", "--method", "mc",
            "--epsilon", "0.05", "--delta", "0.01", "--seed", "7",
            "--format", "json"]
    code, out1, _ = run(capsys, argv)
    assert code == 0
    report = json.loads(out1)
    for row in report["results"][0]["values"]:
        assert abs(row["value_float"] - 0.5) <= 0.05
        assert row["value_rational"] is None
    assert report["results"][0]["seed"] == 7
    assert report["results"][0]["samples"] is not None
    code, out2, _ = run(capsys, argv)
    assert out1 == out2


def test_indices_csv_format(files, capsys):
    code, out, _ = run(capsys, ["indices", files["cycle4"], "--method", "exact",
                                "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "agent,vertex,index_kind,value_rational,value_float,method"
    assert len(lines) == 5  # header + 2 agents x 2 index kinds
    assert "banzhaf" in lines[1] and "shapley" in lines[3]


def test_indices_ranking_descending(files, capsys):
    domain = oracles.path3_with_leaf()
    path = write_json(files["tmp"] / "leaf.json", domain_to_dict(domain))
    code, out, _ = run(capsys, ["indices", path, "--index", "banzhaf",
                                "--format", "json"])
    assert code == 0
    report = json.loads(out)
    ranking = report["results"][0]["ranking"]
    values = {row["agent"]: row["value_float"] for row in report["results"][0]["values"]}
    assert ranking == sorted(values, key=lambda a: (-values[a], a))


def test_indices_explicit_tree_method_on_cycle_exit2(files, capsys):
    code, _, err = run(capsys, ["indices", files["cycle4"], "--method", "tree"])
    assert code == 2
    assert "tree method not applicable" in err


def test_indices_degenerate_domain_auto_uses_exact_zeros(files, capsys):
    code, out, _ = run(capsys, ["indices", files["degenerate"], "--index",
                                "banzhaf", "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["domain"]["degenerate_all_win"]
    assert [row["value_float"] for row in report["results"][0]["values"]] == [0.0]


def test_indices_validation_failure_exit2(files, capsys):
    code, _, err = run(capsys, ["indices", files["invalid"]])
    assert code == 2
    assert "self-loop" in err


def test_indices_cap_exceeded_exit3(files, capsys, monkeypatch):
    monkeypatch.setenv("CONNGAMES_EXACT_CAP", "1")
    code, _, err = run(capsys, ["indices", files["cycle4"], "--method", "exact"])
    assert code == 3
    assert "cap" in err


def test_indices_auto_falls_back_to_mc_over_cap(files, capsys, monkeypatch):
    monkeypatch.setenv("CONNGAMES_EXACT_CAP", "1")
    code, out, _ = run(capsys, ["indices", files["cycle4"], "--index", "banzhaf",
                                "--seed", "3"])
    assert code == 0
    assert "monte-carlo" in out


def test_core_tree(files, capsys):
    code, out, _ = run(capsys, ["core", files["path4"], "--imputation",
                                files["half"]])
    assert code == 0
    assert "veto agents: 0, 1" in out
    assert "core empty: no" in out
    assert "in core: yes" in out


def test_core_cycle_empty(files, capsys):
    code, out, _ = run(capsys, ["core", files["cycle4"]])
    assert code == 0
    assert "core empty: yes" in out


def test_core_degenerate_exit4(files, capsys):
    code, _, err = run(capsys, ["core", files["degenerate"]])
    assert code == 4
    assert "degenerate" in err


def test_core_malformed_imputation_exit2(files, capsys):
    bad = write_json(files["tmp"] / "badp.json", {"imputation": ["0.9", "0.9"]})
    code, _, err = run(capsys, ["core", files["path4"], "--imputation", bad])
    assert code == 2
    assert "imputation" in err


def test_ecm_cycle(files, capsys):
    code, out, _ = run(capsys, ["ecm", files["cycle4"], files["half"],
                                "--epsilon", "0.5"])
    assert code == 0
    assert "max excess: 1/2" in out
    assert "witness coalition: 0" in out
    assert "in epsilon-core: yes" in out
    code, out, _ = run(capsys, ["ecm", files["cycle4"], files["half"],
                                "--epsilon", "0.4"])
    assert "in epsilon-core: no" in out


def test_ecm_tree_path_reports_essential_payment(files, capsys, tmp_path):
    from conngames import add_dummy
    domain = add_dummy(oracles.path4())
    dpath = write_json(tmp_path / "dummy.json", domain_to_dict(domain))
    ppath = write_json(tmp_path / "p3.json", {"imputation": [0.25, 0.25, 0.5]})
    code, out, _ = run(capsys, ["ecm", dpath, ppath, "--epsilon", "0.5"])
    assert code == 0
    assert "tree-essential-sum" in out
    assert "essential payment: 0.5" in out
    assert "in epsilon-core: yes" in out


def test_ecm_negative_epsilon_exit2(files, capsys):
    code, _, err = run(capsys, ["ecm", files["cycle4"], files["half"],
                                "--epsilon", "-0.1"])
    assert code == 2
    assert "nonnegative" in err


def test_ecm_non_tree_over_cap_exit3(files, capsys, monkeypatch):
    monkeypatch.setenv("CONNGAMES_EXACT_CAP", "1")
    code, _, err = run(capsys, ["ecm", files["cycle4"], files["half"],
                                "--epsilon", "0.5"])
    assert code == 3


def test_leastcore_tree_shortcut(files, capsys):
    code, out, _ = run(capsys, ["leastcore", files["path4"]])
    assert code == 0
    assert "tree-closed-form" in out
    assert "least-core epsilon: 0" in out
    assert "agent 0: 1/2" in out


def test_leastcore_cycle(files, capsys):
    code, out, _ = run(capsys, ["leastcore", files["cycle4"], "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["epsilon_min_rational"] == "1/2"
    assert report["method"] == "exact-lp"


def test_leastcore_degenerate_exit4(files, capsys):
    code, _, _ = run(capsys, ["leastcore", files["degenerate"]])
    assert code == 4


def test_leastcore_over_cap_exit3(files, capsys, monkeypatch):
    monkeypatch.setenv("CONNGAMES_LP_CAP", "1")
    code, _, err = run(capsys, ["leastcore", files["cycle4"]])
    assert code == 3
    assert "cap" in err


def test_generate_setcover_roundtrip(files, capsys, tmp_path):
    out_path = tmp_path / "fig.json"
    code, out, _ = run(capsys, ["generate", "setcover", files["setcover"],
                                "--out", str(out_path)])
    assert code == 0
    assert "target agent 4" in out
    data = json.loads(out_path.read_text())
    domain = domain_from_dict(data)
    assert validate(domain).ok
    assert domain.vertex_count == 11
    assert data["meta"]["target_agent"] == 4
    code, _, _ = run(capsys, ["indices", str(out_path), "--method", "exact",
                              "--index", "banzhaf", "--format", "json"])
    assert code == 0


def test_generate_vertexcover_sidecar(files, capsys, tmp_path):
    out_path = tmp_path / "k3dom.json"
    code, out, _ = run(capsys, ["generate", "vertexcover", files["k3"],
                                "--out", str(out_path)])
    assert code == 0
    sidecar = tmp_path / "k3dom.imputation.json"
    assert sidecar.exists()
    payload = json.loads(sidecar.read_text())
    assert payload["imputation"] == ["1/3", "1/3", "1/3"]
    assert payload["epsilon"] == "1/3"
    domain = domain_from_dict(json.loads(out_path.read_text()))
    assert validate(domain).ok
    ppath = write_json(tmp_path / "eq.json", {"imputation": payload["imputation"]})
    code, out, _ = run(capsys, ["ecm", str(out_path), ppath, "--epsilon",
                                str(payload["epsilon_float"])])
    assert code == 0
    assert "in epsilon-core: yes" in out


def test_generate_uncovered_item_warns_but_writes(files, capsys, tmp_path):
    inst = write_json(tmp_path / "gap.json", {"universe": 3, "sets": [[0], [1]]})
    out_path = tmp_path / "gap_domain.json"
    code, _, err = run(capsys, ["generate", "setcover", inst, "--out", str(out_path)])
    assert code == 0
    assert "no cover exists" in err
    assert out_path.exists()


def test_generate_malformed_instance_exit2(files, capsys, tmp_path):
    inst = write_json(tmp_path / "broken.json", {"universe": 2})
    code, _, _ = run(capsys, ["generate", "setcover", inst, "--out",
                              str(tmp_path / "x.json")])
    assert code == 2


def test_cli_reruns_are_byte_identical(files, capsys, tmp_path):
    invocations = [
        ["indices", files["path4"]],
        ["indices", files["cycle4"], "--method", "exact", "--format", "json"],
        ["indices", files["cycle4"], "--method", "mc", "--seed", "11",
         "--format", "csv"],
        ["core", files["path4"], "--imputation", files["half"], "--format", "json"],
        ["ecm", files["cycle4"], files["half"], "--epsilon", "0.5",
         "--format", "json"],
        ["leastcore", files["cycle4"], "--format", "json"],
    ]
    for argv in invocations:
        first = run(capsys, argv)
        second = run(capsys, argv)
        assert first == second, argv
    out_path = tmp_path / "gen.json"
    run(capsys, ["generate", "vertexcover", files["k3"], "--out", str(out_path)])
    blob1 = out_path.read_bytes()
    side1 = (tmp_path / "gen.imputation.json").read_bytes()
    run(capsys, ["generate", "vertexcover", files["k3"], "--out", str(out_path)])
    assert out_path.read_bytes() == blob1
    assert (tmp_path / "gen.imputation.json").read_bytes() == side1
