import json
import subprocess
import sys

import pytest

from ai_energy_game import build_instance, cli, policy
from ai_energy_game.calibration import read_params, write_params


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_solve_json(capsys):
    code, out = run(capsys, "solve", "--instance", "A", "--d0", "50", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["x_star"] == 1.0 and rec["carbon_free"] is False
    _, out = run(capsys, "solve", "--instance", "B", "--d0", "0", "--json")
    assert json.loads(out)["emissions"] == 0.0
    _, out = run(capsys, "solve", "--instance", "C", "--d0", "100", "--json")
    assert json.loads(out)["carbon_free"] is True


def test_solve_text_and_file(capsys, tmp_path):
    out_path = tmp_path / "eq.json"
    code, out = run(capsys, "solve", "--instance", "B", "--d0", "20", "--out", str(out_path))
    assert code == 0 and "classification" in out
    assert json.loads(out_path.read_text())["zone"] == "Coupling"


def test_invalid_configs_exit_2(capsys, tmp_path):
    assert cli.main(["solve", "--instance", "Z"]) == 2
    assert cli.main(["solve", "--instance", "A", "--set", "b=2"]) == 2
    assert cli.main(["solve", "--instance", "A", "--set", "gamma=1"]) == 2
    assert cli.main(["solve"]) == 2
    assert cli.main(["solve", "--params", str(tmp_path / "missing.txt")]) == 2
    assert cli.main(["sweep", "--instance", "A", "--d0-min", "5", "--d0-max", "1"]) == 2
    assert cli.main(["counterfactual", "--instance", "A", "--scenario", "x:alpha=2"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--d0", "abc"])
    assert exc.value.code == 2


def test_solver_sentinel_exit_3(capsys, monkeypatch):
    real = policy.optimal_capacity

    def broken(p, **kw):
        eq = real(p, **kw)
        return policy.Equilibrium(**{**eq.__dict__, "welfare": float("nan")})

    monkeypatch.setattr(policy, "optimal_capacity", broken)
    assert cli.main(["solve", "--instance", "A"]) == 3


def test_config_precedence(capsys, tmp_path):
    path = tmp_path / "p.txt"
    write_params(build_instance("B").replace(theta=20.0), path)
    _, out = run(capsys, "solve", "--params", str(path), "--json")
    from_file = json.loads(out)
    _, out = run(capsys, "solve", "--instance", "A", "--params", str(path), "--set", "theta=25", "--json")
    overridden = json.loads(out)
    assert from_file != overridden
    partial = tmp_path / "partial.txt"
    partial.write_text("theta = 25\n")
    _, out = run(capsys, "solve", "--instance", "B", "--params", str(partial), "--json")
    assert json.loads(out) == overridden


def test_sweep_instance_b(capsys):
    code, out = run(capsys, "sweep", "--instance", "B", "--d0-min", "0", "--d0-max", "60", "--steps", "601", "--jobs", "2")
    assert code == 0 and out.startswith("# schema-version: 1\nd0,x_star,y_star,energy_demand,beta,emissions,welfare,zone\n")
    data = rows(out)
    assert len(data) == 601
    growing = [r for r in data if 6.8 <= float(r["d0"]) <= 41.9]
    demand = [float(r["energy_demand"]) for r in growing]
    capacity = [float(r["y_star"]) for r in growing]
    assert demand == sorted(demand) and capacity == sorted(capacity) and demand[-1] > demand[0]
    assert "# active: switches in (6.7, 6.8]" in out
    assert "# carbon_free: switches in (41.9, 42]" in out


def test_sweep_is_deterministic_across_job_counts(capsys):
    args = ["sweep", "--instance", "C", "--d0-min", "0", "--d0-max", "50", "--steps", "21"]
    _, one = run(capsys, *args, "--jobs", "1")
    _, three = run(capsys, *args, "--jobs", "3")
    assert one == three


def test_sweep_instance_d_flat(capsys):
    _, out = run(capsys, "sweep", "--instance", "D", "--d0-min", "0", "--d0-max", "100", "--steps", "11")
    assert {r["x_star"] for r in rows(out)} == {"1"}
    _, out = run(capsys, "sweep", "--instance", "D", "--d0-min", "7", "--d0-max", "7", "--steps", "50")
    assert len(rows(out)) == 1


def test_counterfactual(capsys):
    _, out = run(capsys, "counterfactual", "--instance", "C", "--scenario", "base:d0=351.7", "--scenario", "small:k=0.775,d0=351.7")
    data = rows(out)
    assert [r["label"] for r in data] == ["base", "small"]
    assert float(data[0]["required_reduction"]) == pytest.approx(0.4171, abs=5e-3)
    assert float(data[1]["required_reduction"]) == pytest.approx(0.135, abs=5e-3)


def test_calibrate(capsys, tmp_path):
    assert cli.main(["calibrate", "--out", str(tmp_path)]) == 0
    assert read_params(tmp_path / "instance_C.txt") == build_instance("C")
    assert "lambda,US,3.83" in (tmp_path / "calibration.csv").read_text()


def test_audit(capsys):
    code, out = run(capsys, "audit", "--n-per-regime", "0")
    assert code == 0 and out.strip().endswith("PASS")
    code, out = run(capsys, "audit", "--n-per-regime", "3", "--seed", "4", "--grid-x", "2001")
    assert code == 0


def test_duopoly_map_fixed_capacities(capsys):
    code, out = run(
        capsys, "duopoly-map", "--instance", "A", "--d0", "50", "--capacities", "10,30",
        "--theta-steps", "5", "--lambda-steps", "3",
    )
    assert code == 0 and "theta,lambda,region,x1,x2,y1,y2,coverage_share" in out
    assert {r["region"] for r in rows(out)} == {"MonopolyCollapse", "PartialCarbonFree", "DualTrap"}
    assert cli.main(["duopoly-map", "--instance", "A", "--capacities", "1"]) == 2


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "ai_energy_game.cli", "solve", "--instance", "D", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(res.stdout)["classification"] == "AlwaysCarbonIntensive"
