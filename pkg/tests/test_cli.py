import json
import math

import pytest

from hhbounds import cli

INTERVAL = json.dumps({"n": 1, "vertices": [[0.0], [1.0]]})
TRIANGLE = json.dumps({"n": 2, "vertices": [[0, 0], [1, 0], [0, 1]]})
SQUARE = json.dumps({"class": "norm_power", "params": {"p": 2}})
NEG_SQUARE = json.dumps({"class": "concave_control", "params": {"base": json.loads(SQUARE)}})


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_holds(capsys):
    code, out, _ = run(capsys, "bounds", "--simplex", INTERVAL, "--function", SQUARE,
                       "--family", "classical")
    assert code == 0
    rep = json.loads(out)
    assert rep["lower"] == 0.25 and rep["upper"] == 0.5
    assert rep["middle"]["value"] == pytest.approx(1 / 3, rel=1e-15)
    assert rep["status"] == "holds"


def test_bounds_violated(capsys):
    code, out, _ = run(capsys, "bounds", "--simplex", INTERVAL, "--function", NEG_SQUARE,
                       "--family", "classical")
    assert code == 2 and json.loads(out)["status"] == "violated"


def test_bounds_inconclusive_exit_code(capsys):
    # an affine integrand forced through Monte Carlo sits inside the guard band
    lin = json.dumps({"class": "affine", "params": {"w": [1.0, 1.0]}})
    code, out, _ = run(capsys, "bounds", "--simplex", TRIANGLE, "--function", lin,
                       "--family", "classical", "--method", "mc", "--samples", "1000")
    assert code == 3 and json.loads(out)["status"] == "inconclusive"


@pytest.mark.parametrize("argv", [
    ["bounds", "--simplex", "{not json", "--function", SQUARE, "--family", "classical"],
    ["bounds", "--simplex", INTERVAL, "--function", '{"class": "bogus"}', "--family", "classical"],
    ["bounds", "--simplex", INTERVAL, "--function", SQUARE, "--family", "strongly_convex"],
    ["bounds", "--simplex", INTERVAL, "--function", SQUARE, "--family", "nope"],
    ["bounds", "--simplex", json.dumps({"n": 1, "vertices": [[0.0], [0.0]]}),
     "--function", SQUARE, "--family", "classical"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_bounds_reads_files(capsys, tmp_path):
    (tmp_path / "s.json").write_text(INTERVAL)
    (tmp_path / "f.json").write_text(SQUARE)
    code, _, _ = run(capsys, "bounds", "--simplex", f"@{tmp_path / 's.json'}",
                     "--function", f"@{tmp_path / 'f.json'}", "--family", "wright")
    assert code == 0


def test_integrate_exact(capsys):
    pi1sq = json.dumps({"class": "quadratic_form", "params": {"Q": [[1, 0], [0, 0]]}})
    code, out, _ = run(capsys, "integrate", "--simplex", TRIANGLE, "--function", pi1sq,
                       "--method", "exact")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(1 / 12, rel=1e-14)


def test_integrate_constant_gives_volume(capsys):
    S = json.dumps({"n": 2, "vertices": [[0, 0], [3, 0], [1, 2]]})
    one = json.dumps({"class": "affine", "params": {"w": 0.0, "b": 1.0}})
    code, out, _ = run(capsys, "integrate", "--simplex", S, "--function", one)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(3.0)


def test_integrate_exact_needs_polynomial(capsys):
    e = json.dumps({"class": "exp_linear", "params": {"w": [1.0, 1.0]}})
    code, _, err = run(capsys, "integrate", "--simplex", TRIANGLE, "--function", e,
                       "--method", "exact")
    assert code == 1 and "polynomial" in err


def test_integrate_mc_seed_consistency(capsys):
    e = json.dumps({"class": "exp_linear", "params": {"w": [1.0, 1.0]}})
    runs = []
    for seed in ("1", "2"):
        code, out, _ = run(capsys, "integrate", "--simplex", TRIANGLE, "--function", e,
                           "--method", "mc", "--samples", "1000000", "--seed", seed)
        assert code == 0
        runs.append(json.loads(out))
    a, b = runs
    assert a["value"] != b["value"]
    assert abs(a["value"] - b["value"]) < 5 * math.hypot(a["std_error"], b["std_error"])


SMALL = {"dimensions": [1, 2], "simplices_per_dim": 2, "mc_samples": 500,
         "function_catalog": [{"catalog": "convex"}, {"catalog": "wright"}]}


def test_verify_is_deterministic(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(SMALL))
    outs = []
    target = tmp_path / "out.json"
    for _ in range(2):
        code, _, err = run(capsys, "verify", "--config", str(cfg), "--seed", "5",
                           "--out", str(target))
        assert code == 0 and "positive classes" in err
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    agg = json.loads(outs[0])["aggregate"]
    assert agg["positive"]["violated"] == 0
    assert agg["total"] == agg["holds"] + agg["violated"] + agg["inconclusive"]


def test_verify_controls_only(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"dimensions": [1, 2], "simplices_per_dim": 3,
                               "families": ["classical"], "mc_samples": 1000,
                               "function_catalog": [{"catalog": "control"}]}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    agg = json.loads(out)["aggregate"]
    assert agg["violated"] > 0
    # controls never fail the run: the exit code only looks at positive classes
    assert code == 0 and agg["positive"]["total"] == 0


def test_verify_csv(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "families": ["classical"]}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].split(",") == cli.CSV_FIELDS
    assert len(lines) > 1


def test_verify_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"simplices_per_dim": 0}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 1
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 1
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.json"))[0] == 1


def test_seed_resolution(monkeypatch):
    monkeypatch.delenv("HH_SEED", raising=False)
    assert cli.resolve_seed(None) == 0
    monkeypatch.setenv("HH_SEED", "17")
    assert cli.resolve_seed(None) == 17
    assert cli.resolve_seed(None, 3) == 3
    assert cli.resolve_seed(4, 3) == 4
    monkeypatch.setenv("HH_SEED", "x")
    with pytest.raises(cli.UsageError):
        cli.resolve_seed(None)


def test_env_seed_drives_mc(capsys, monkeypatch):
    e = json.dumps({"class": "exp_linear", "params": {"w": [1.0]}})
    args = ["integrate", "--simplex", INTERVAL, "--function", e, "--method", "mc",
            "--samples", "1000"]
    monkeypatch.setenv("HH_SEED", "9")
    a = run(capsys, *args)[1]
    b = run(capsys, *args, "--seed", "9")[1]
    c = run(capsys, *args, "--seed", "10")[1]
    assert a == b and a != c
