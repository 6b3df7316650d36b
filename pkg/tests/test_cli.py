import csv
import io
import json
import subprocess
import sys

import pytest

from lastmile.cli import main
from lastmile.scenario import FIXTURE_SCENARIO, data_path


@pytest.fixture
def scenario():
    return str(data_path(FIXTURE_SCENARIO))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_optimize_stdout(scenario, capsys):
    code, out, err = run(["optimize", scenario], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["scenario"]["deliveries"] == [32, 16, 13, 29, 10, 5]
    assert 1 <= doc["sweep"]["best_k"] <= 6
    assert f"scenario={scenario}" in err and "seed=" in err


def test_optimize_alpha_override(scenario, capsys):
    code, out, _ = run(["optimize", scenario, "--alpha", "1.0"], capsys)
    assert code == 0
    assert json.loads(out)["scenario"]["alpha"] == 1.0
    code, _, err = run(["optimize", scenario, "--alpha", "2"], capsys)
    assert code == 3 and "alpha" in err


def test_simulate_single_k_with_trajectory(scenario, tmp_path, capsys):
    out_path, traj = tmp_path / "sim.json", tmp_path / "traj.csv"
    code, out, _ = run(["simulate", scenario, "-k", "2", "-o", str(out_path), "--trajectory", str(traj),
                        "--idm-model", "standard"], capsys)
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["idm"]["model"] == "standard"
    sim = doc["simulation"]
    assert sim["k"] == 2
    assert set(sim["measured"]["delivery_times"]) == {str(j) for j in range(1, 7)}
    rows = list(csv.reader(io.StringIO(traj.read_text())))
    assert rows[0] == ["t", "vehicle", "edge", "position_m", "speed_mps"]
    assert len(rows) > 10


def test_simulate_bad_k(scenario, capsys):
    code, _, err = run(["simulate", scenario, "-k", "9"], capsys)
    assert code == 3 and "fleet-size" in err


def test_compare_exact(tmp_path, capsys):
    out = tmp_path / "gap.json"
    code, _, _ = run(["compare-exact", "-m", "3", "4", "-n", "5", "--seed", "1", "-o", str(out)], capsys)
    assert code == 0
    recs = json.loads(out.read_text())["records"]
    assert len(recs) == 10
    assert all(r["gap"] >= 0 for r in recs)


def test_cap_exceeded_exit_4(tmp_path, capsys):
    out = tmp_path / "gap.json"
    code, _, err = run(["compare-exact", "-m", "12", "-o", str(out)], capsys)
    assert code == 4 and "cap" in err
    assert not out.exists()


def test_pareto_csv(capsys):
    code, out, _ = run(["pareto", "-m", "4", "-n", "3", "--seed", "5"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3 * 4
    assert {"k", "J_s", "J_c", "total", "batch_pareto"} <= set(rows[0])


def test_gen_scenario_then_optimize(tmp_path, capsys):
    code, _, _ = run(["gen-scenario", "-m", "5", "-n", "3", "--seed", "8", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    files = sorted(tmp_path.glob("scenario_*.json"))
    assert len(files) == 3
    assert json.loads(files[0].read_text())["seed"] == 8
    code, out, _ = run(["optimize", str(files[1])], capsys)
    assert code == 0 and len(json.loads(out)["scenario"]["deliveries"]) == 5


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "s.json"
    bad.write_text("{not json")
    assert run(["optimize", str(bad)], capsys)[0] == 2
    code, _, err = run(["optimize", str(tmp_path / "absent.json")], capsys)
    assert code == 2 and "[parse]" in err


def test_validation_error_exit_3(tmp_path, capsys, scenario):
    doc = json.loads(open(scenario).read())
    doc["deliveries"][0] = 39  # the fixture depot
    doc["network"] = str(data_path(doc["network"]))
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["optimize", str(path)], capsys)
    assert code == 3 and "deliveries[0]" in err


def test_internal_error_exit_5(scenario, tmp_path, capsys, monkeypatch):
    import lastmile.cli as cli

    def boom(*a, **k):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(cli, "sweep", boom)
    out = tmp_path / "o.json"
    code, _, err = run(["optimize", scenario, "-o", str(out)], capsys)
    assert code == 5 and "disk on fire" in err
    assert not out.exists()


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["optimize"])
    assert exc.value.code == 2


def test_console_script_runs(scenario):
    proc = subprocess.run([sys.executable, "-m", "lastmile.cli", "optimize", scenario],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["sweep"]["best_k"] >= 1
