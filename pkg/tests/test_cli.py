"""End-to-end command-line behavior: schemas, determinism, exit codes."""

import json
import math

import pytest

from jetspace.cli import main


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _run(tmp_path, args):
    out = tmp_path / "out.json"
    code = main([*args, "--output", str(out)])
    return code, out.read_text() if out.exists() else None


MOD_D = {"family": "power", "q": 1.0, "m": 2}
JET1 = {"poly": {"n": 1, "L": 1, "coef": {"[1]": 1.0}}, "cube": {"x": [0.0], "r": 1.0}}
JET0 = {"poly": {"n": 1, "L": 1, "coef": {}}, "cube": {"x": [0.0], "r": 1.0}}


def test_metric_equal_cubes(tmp_path):
    path = _write(
        tmp_path, "in.json",
        {"omega": MOD_D, "cubes": [{"x": [0.0], "r": 1.0}, {"x": [0.0], "r": 1.0}]},
    )
    code, text = _run(tmp_path, ["metric", "--input", path])
    assert code == 0
    data = json.loads(text)
    assert data["cube_distance"] == 0.0
    assert data["weighted_cube_distance"] == 0.0
    assert data["poincare_distance"] == 0.0


def test_metric_worked_jet_pair(tmp_path):
    path = _write(tmp_path, "in.json", {"omega": MOD_D, "jets": [JET1, JET0]})
    code, text = _run(tmp_path, ["metric", "--input", path])
    assert code == 0
    data = json.loads(text)
    assert data["jet_distance"] == pytest.approx(1.0, abs=1e-10)
    assert data["geodesic_lower"] <= data["geodesic_upper"] <= data["jet_distance"]


def test_metric_same_poly_jets_collapse(tmp_path):
    jet_a = {"poly": {"n": 1, "L": 1, "coef": {"[1]": 2.0}}, "cube": {"x": [0.0], "r": 1.0}}
    jet_b = {"poly": {"n": 1, "L": 1, "coef": {"[1]": 2.0}}, "cube": {"x": [1.5], "r": 0.5}}
    path = _write(tmp_path, "in.json", {"omega": MOD_D, "jets": [jet_a, jet_b]})
    code, text = _run(tmp_path, ["metric", "--input", path])
    data = json.loads(text)
    assert data["jet_distance"] == data["weighted_cube_distance"]


def test_metric_csv_mode(tmp_path):
    path = _write(tmp_path, "in.json", {"omega": MOD_D, "jets": [JET1, JET0]})
    out = tmp_path / "out.csv"
    code = main(["metric", "--input", path, "--format", "csv", "--output", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "quantity,value"
    assert any(line.startswith("jet_distance,") for line in lines)


def test_check_polynomial_trace(tmp_path):
    xs = [-1.0, -0.6, -0.2, 0.2, 0.6, 1.0]
    payload = {
        "n": 1, "k": 0, "m": 2, "omega": MOD_D,
        "points": [{"x": [x], "f": 0.5 + 2.0 * x} for x in xs],
        "radii": [2.0, 1.0, 0.9],
    }
    path = _write(tmp_path, "in.json", payload)
    code, text = _run(tmp_path, ["check", "--input", path])
    assert code == 0
    data = json.loads(text)
    conds = {c["name"]: c for c in data["report"]["conditions"]}
    assert conds["pairwise_growth"]["lambda_hat"] <= 1e-8
    assert data["lo_seminorm"]["value"] <= 1e-8
    assert len(data["limit_jets"]) == len(xs)


def test_check_csv_rows_per_pair(tmp_path):
    xs = [0.0, 1.0]
    payload = {
        "n": 1, "k": 0, "m": 2, "omega": MOD_D,
        "points": [{"x": [x], "f": x * x} for x in xs],
        "radii": [1.0, 0.5],
    }
    path = _write(tmp_path, "in.json", payload)
    out = tmp_path / "out.csv"
    code = main(["check", "--input", path, "--format", "csv", "--output", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    n_cubes = len(xs) * 2
    assert len(lines) == 1 + n_cubes * (n_cubes - 1)


def test_check_jet_data(tmp_path):
    # jet samples: order-0 data polynomials of a linear function
    xs = [-1.0, 0.0, 1.0]
    payload = {
        "n": 1, "k": 0, "m": 2, "omega": MOD_D,
        "points": [
            {"x": [x], "jet": {"n": 1, "L": 0, "coef": {"[0]": 2.0 * x + 1.0}}}
            for x in xs
        ],
        "radii": [2.0, 1.5, 1.0],
    }
    path = _write(tmp_path, "in.json", payload)
    code, text = _run(tmp_path, ["check", "--input", path])
    assert code == 0
    data = json.loads(text)
    conds = {c["name"]: c for c in data["report"]["conditions"]}
    assert conds["pairwise_growth"]["lambda_hat"] <= 1e-7
    assert "interpolation" not in data["report"]


def test_select_singleton(tmp_path):
    def sing(c0, c1, x, r):
        return {
            "cube": {"x": [x], "r": r},
            "set": {"base": {"n": 1, "L": 1, "coef": {"[0]": c0, "[1]": c1}},
                    "dirs": [], "ineq": []},
        }

    payload = {
        "context": {"n": 1, "k": 1, "m": 1, "omega": {"family": "power", "q": 1.0, "m": 1}},
        "nodes": [sing(0.0, 0.0, 0.0, 1.0), sing(1.0, 0.5, 2.0, 0.5)],
    }
    path = _write(tmp_path, "in.json", payload)
    code, text = _run(tmp_path, ["select", "--input", path])
    assert code == 0
    data = json.loads(text)
    assert data["status"] == "optimal"
    assert data["lambda_star"] > 0


def test_select_with_experiment(tmp_path):
    def interval(lo, hi, x):
        return {
            "cube": {"x": [x], "r": 1.0},
            "set": {
                "base": {"n": 1, "L": 0, "coef": {}},
                "dirs": [{"n": 1, "L": 0, "coef": {"[0]": 1.0}}],
                "ineq": [{"a": [1.0], "b": hi}, {"a": [-1.0], "b": -lo}],
            },
        }

    payload = {
        "context": {"n": 1, "k": 0, "m": 1, "omega": {"family": "power", "q": 1.0, "m": 1}},
        "nodes": [interval(0, 0.2, 0.0), interval(1, 1.5, 1.0), interval(-2, -1.2, 3.0)],
        "experiment": {"ell": 1},
    }
    path = _write(tmp_path, "in.json", payload)
    code, text = _run(tmp_path, ["select", "--input", path])
    assert code == 0
    data = json.loads(text)
    assert data["experiment"]["gamma_hat"] >= 1.0 - 1e-9
    assert data["experiment"]["exhaustive"]


def test_counterexample_json_and_monotonicity(tmp_path):
    code, text = _run(tmp_path, ["counterexample", "--imax", "5"])
    assert code == 0
    rows = json.loads(text)["rows"]
    assert len(rows) == 5
    assert rows[0]["log_distance"] == pytest.approx(math.log(9.0), rel=1e-12)
    steps = [r["step_distance"] for r in rows]
    assert steps == sorted(steps, reverse=True)


def test_properties_small_run_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    code1 = main(["properties", "--trials", "60", "--output", str(out1)])
    code2 = main(["properties", "--trials", "60", "--output", str(out2)])
    assert code1 == 0 and code2 == 0
    assert out1.read_bytes() == out2.read_bytes()
    data = json.loads(out1.read_text())
    assert data["all_passed"] is True
    assert {s["name"] for s in data["suites"]} >= {
        "triangle_cube", "chain_scaling", "lipschitz_forms",
    }


def test_properties_seed_changes_output(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["properties", "--trials", "40", "--output", str(out1)])
    main(["properties", "--trials", "40", "--seed", "7", "--output", str(out2)])
    assert out1.read_bytes() != out2.read_bytes()


def test_malformed_input_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["metric", "--input", str(bad)]) == 2
    missing_field = _write(tmp_path, "mf.json", {"omega": MOD_D})
    assert main(["metric", "--input", str(missing_field)]) == 2
    assert main(["metric"]) == 2  # no input at all


def test_counterexample_bound_exit_code(capsys):
    assert main(["counterexample", "--imax", "31"]) == 2
    err = capsys.readouterr().err
    assert "error" in err and "ValueError" in err
