import json
import shutil
import subprocess

import pytest

from cremona_lab.cli import FIXTURES, load_fixture, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out else None, out.err


def write(tmp_path, data, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_quad_random_triple(capsys):
    code, data, _ = run(capsys, "quad", "--seed", "3")
    assert code == 0 and data["exit_code"] == 0
    assert set(data["checks"].values()) == {"pass"}
    assert data["triple"]["source"] == "random" and data["seed"] == 3


def test_quad_from_file(capsys, tmp_path):
    path = write(tmp_path, {"a": ["1", "0", "0"], "b": ["0", "1", "0"], "c": ["0", "0", "1"]})
    code, data, _ = run(capsys, "quad", path)
    assert code == 0 and data["transform"] == data["standard"]
    assert len(data["contracted_lines"]) == 3


def test_quad_collinear_is_input_error(capsys, tmp_path):
    path = write(tmp_path, {"a": ["1", "0", "0"], "b": ["0", "1", "0"], "c": ["1", "1", "0"]})
    code, data, err = run(capsys, "quad", path)
    assert code == 2 and "collinear" in data["error"] and "collinear" in err


def test_unknown_key_is_rejected(capsys, tmp_path):
    path = write(tmp_path, {"a": ["1", "0", "0"], "b": ["0", "1", "0"], "c": ["0", "0", "1"], "d": 1})
    code, data, _ = run(capsys, "quad", path)
    assert code == 2 and "unknown keys" in data["error"]


def test_malformed_json_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, _ = run(capsys, "p1-tower", str(p))
    assert code == 2


def test_missing_file_is_input_error(capsys, tmp_path):
    code, data, _ = run(capsys, "disc", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read input" in data["error"]


def test_usage_error_exits_two(capsys):
    assert main(["no-such-command"]) == 2
    assert main(["quad", "--seed", "-4"]) == 2


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load(name):
    assert isinstance(load_fixture(name), dict)
    assert load_fixture(name + ".json") == load_fixture(name)


def test_unknown_fixture(capsys):
    code, data, _ = run(capsys, "disc", "--fixture", "nothing")
    assert code == 2 and "unknown fixture" in data["error"]


def test_factor_tower_fixture(capsys):
    code, data, _ = run(capsys, "factor-tower", "--fixture", "fig1_tower", "--seed", "0")
    assert code == 0 and data["verification"]["passed"] and data["n"] == 3


def test_factor_tower_with_curve(capsys):
    code, data, _ = run(capsys, "factor-tower", "--fixture", "cusp_curve")
    assert code == 0 and data["curve"]["multiplicities"] == [2, 1, 1]


def test_factor_tower_tiny_budget_fails(capsys):
    code, data, _ = run(capsys, "factor-tower", "--fixture", "fig1_tower", "--budget", "1")
    assert code == 1 and data["error"].startswith("budget exhausted")


def test_ramify_fixture(capsys):
    code, data, _ = run(capsys, "ramify", "--fixture", "lemma44_family")
    assert code == 0
    assert [row["index"] for row in data["cases"]] == [2, 1, 3, 4, 5]


def test_ramify_wrong_expectation_fails(capsys, tmp_path):
    case = load_fixture("lemma44_family")["cases"][0] | {"expected_index": 7}
    code, data, _ = run(capsys, "ramify", write(tmp_path, case))
    assert code == 1 and data["cases"][0]["passed"] is False


def test_p1_tower(capsys, tmp_path):
    z2 = {"num": {"vars": ["z"], "terms": [{"exp": [2], "coef": "1"}]}, "den": {"vars": ["z"], "terms": [{"exp": [0], "coef": "1"}]}}
    z3 = {"num": {"vars": ["z"], "terms": [{"exp": [3], "coef": "1"}]}, "den": z2["den"]}
    code, data, _ = run(capsys, "p1-tower", write(tmp_path, {"maps": [z2, z3]}))
    assert code == 0 and data["a"] == "1" and [lv["m"] for lv in data["levels"]] == [2, 6]
    code, data, _ = run(capsys, "p1-tower", write(tmp_path, {"maps": [z2, z3]}), "--budget", "1")
    assert code == 1 and data["obstructions"] == {"0": ["0"], "1": ["0"]}
    code, _, _ = run(capsys, "p1-tower", write(tmp_path, {"maps": [z2], "a": "0"}))
    assert code == 2


def test_disc_fixture(capsys):
    code, data, _ = run(capsys, "disc", "--fixture", "z2_xy_surface")
    assert code == 0 and data["discriminant"]["disc"] == "4*X*Y"
    assert all(c["passed"] for c in data["components"])


def test_disc_constant_discriminant_fails(capsys, tmp_path):
    fx = load_fixture("z2_xy_surface")
    surf = fx["surface"]
    surf = {"poly": {"vars": ["X", "Y", "Z"], "terms": [{"exp": [0, 0, 2], "coef": "1"}, {"exp": [0, 0, 0], "coef": "-1"}]}, "roles": surf["roles"]}
    code, data, _ = run(capsys, "disc", write(tmp_path, {"surface": surf}))
    assert code == 1 and "warning" in data["discriminant"]


def test_selftest_rejects_input(capsys):
    code, _, _ = run(capsys, "selftest", "--fixture", "fig1_tower")
    assert code == 2


def test_env_seed_is_used(capsys, monkeypatch):
    monkeypatch.setenv("CREMONA_LAB_SEED", "17")
    code, data, _ = run(capsys, "quad")
    assert code == 0 and data["seed"] == 17
    monkeypatch.setenv("CREMONA_LAB_SEED", "banana")
    code, _, _ = run(capsys, "quad")
    assert code == 2


def test_same_seed_same_transcript(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["factor-tower", "--fixture", "fig1_tower", "--seed", "9", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


@pytest.mark.skipif(shutil.which("cremona-lab") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["cremona-lab", "quad", "--seed", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "quad"
