import json

import pytest

from sunlab import scene_io
from sunlab.cli import main
from sunlab.config import Config
from sunlab.scenario_lab import FAMILIES, generate


@pytest.fixture
def cross_file(tmp_path):
    path = tmp_path / "cross.json"
    assert main(["generate", "--family", "main-cross", "--dim", "3", "--seed", "1", "-o", str(path)]) == 0
    return path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_strict_sun_command(cross_file, capsys):
    assert main(["check-strict-sun", str(cross_file), "--sweep-budget", "40", "--jobs", "1"]) == 1
    w = _json(capsys)["witness"]
    assert (w["x"], w["y"], w["lambda"]) == (["1", "1", "0"], ["1", "0", "0"], "2")


def test_project_command(cross_file, capsys):
    assert main(["project", str(cross_file), "--point", "1,2,0"]) == 0
    out = _json(capsys)
    assert out["rho"] == "1" and out["witnesses"] == ["(0,2,0)"]
    assert main(["project", str(cross_file), "--point", "1,1/3,0", "--decimal", "3"]) == 0
    assert _json(capsys)["rho"] == "0.333"


def test_classify_four_dim_cocross(tmp_path, capsys):
    path = tmp_path / "slab_cocross.json"
    assert main(["generate", "--family", "remark_r4", "-o", str(path)]) == 0
    assert main(["classify", str(path)]) == 0
    out = _json(capsys)
    assert out["is_cocross"] and not out["is_cross"]


def test_convexity_and_sun_commands(cross_file, tmp_path, capsys):
    assert main(["check-l1", str(cross_file)]) == 0
    assert main(["check-strict-l1", str(cross_file)]) == 0
    assert main(["check-sun", str(cross_file), "--sweep-budget", "20", "--jobs", "1"]) == 0
    pair = tmp_path / "pair.json"
    assert main(["generate", "--family", "two_points", "--seed", "0", "-o", str(pair)]) == 0
    assert main(["check-l1", str(pair)]) == 1
    capsys.readouterr()


def test_cone_and_validate_commands(cross_file, capsys):
    assert main(["cone-test", str(cross_file), "--x", "1,1,0", "--y", "1,0,0", "--z", "0,1/2,0"]) == 0
    out = _json(capsys)
    assert out["cone_contains"] and out["agree"] and out["ob_condition"] == "Violated"
    assert main(["validate", "--theorem", "1", str(cross_file), "--sweep-budget", "30", "--jobs", "1"]) == 0
    assert _json(capsys)["agreements"]["theorem1"]["agree"]


def test_usage_errors(cross_file, tmp_path, capsys):
    assert main(["bogus"]) == 2
    assert main(["project", str(cross_file)]) == 2
    assert main(["project", str(tmp_path / "missing.json"), "--point", "1,1,1"]) == 2
    assert main(["project", str(cross_file), "--point", "1,2"]) == 2
    assert main(["generate", "--family", "nope"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", str(bad)]) == 2
    capsys.readouterr()


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("SUNLAB_SEED", "3")
    assert main(["generate", "--family", "random_box", "--dim", "3"]) == 0
    assert _json(capsys)["name"] == "random_box-3"
    monkeypatch.setenv("SUNLAB_SEED", "x")
    assert main(["generate", "--family", "random_box"]) == 2


def test_suite_command(tmp_path):
    out = tmp_path / "report.json"
    code = main(["suite", "--quick", "--only", "cross,four_dim_cocross,main_cocross", "--seed", "2", "-o", str(out), "--jobs", "1"])
    report = json.loads(out.read_text())
    assert code == 0 and report["passed"]
    assert [c["key"] for c in report["checks"]] == ["cross", "four_dim_cocross", "main_cocross"]


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_scene_round_trip_is_byte_identical(family, tmp_path):
    params = {} if family in ("remark_r4", "cocross_cJ") else {"dim": 3}
    M = generate(family, 2, **params)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    scene_io.save_scene(M, a)
    M2 = scene_io.load_scene(a)
    scene_io.save_scene(M2, b)
    assert a.read_bytes() == b.read_bytes()
    assert M2 == M
    prim = json.loads(a.read_text())["primitives"][0]
    coords = [c for v in prim.values() if isinstance(v, list) for p in (v if isinstance(v[0], list) else [v]) for c in p]
    assert coords and all(isinstance(c, str) for c in coords)


def test_config_validation():
    Config()
    for bad in ({"lambda_schedule": (4, 2)}, {"lambda_schedule": ()}, {"extent": 0},
                {"sweep_budget": 0}, {"densities": (0,)}, {"seed": -1}):
        with pytest.raises(ValueError):
            Config(**bad)
    with pytest.raises(TypeError):
        Config(extent=0.5)
