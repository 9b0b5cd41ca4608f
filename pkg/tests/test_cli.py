"""CLI contract: subcommands, config round trip, exit codes, CSV determinism."""

import json
import subprocess
import sys

import pytest

from walkwait.cli import (
    SWEEP_CSV_HEADER,
    config_to_dict,
    main,
    parse_config,
)

UNIFORM_SCENARIO = {
    "route": {"stops": [0, 1.0, 2.0]},
    "traveler": {"v_w": 4, "v_b": 20},
    "distribution": {"kind": "uniform", "t_b": 0.5},
}


@pytest.fixture
def scenario_path(tmp_path):
    def write(obj, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def test_config_round_trip():
    cfg = parse_config(UNIFORM_SCENARIO)
    assert parse_config(config_to_dict(cfg)) == cfg
    with_deadline = dict(UNIFORM_SCENARIO, deadline=0.6)
    cfg2 = parse_config(with_deadline)
    assert cfg2.deadline == 0.6
    assert parse_config(config_to_dict(cfg2)) == cfg2


def test_config_rejects_unknown_fields():
    with pytest.raises(ValueError, match="unknown fields"):
        parse_config(dict(UNIFORM_SCENARIO, speed=3))
    bad_route = dict(UNIFORM_SCENARIO, route={"stops": [0, 2], "name": "x"})
    with pytest.raises(ValueError, match="config.route"):
        parse_config(bad_route)
    with pytest.raises(ValueError, match="missing fields"):
        parse_config({"route": {"stops": [0, 2]}})


def test_dump_config_round_trips(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["decide", "--config", path, "--dump-config"]) == 0
    dumped = json.loads(capsys.readouterr().out)
    assert parse_config(dumped) == parse_config(UNIFORM_SCENARIO)


def test_decide_uniform(scenario_path, capsys):
    assert main(["decide", "--config", scenario_path(UNIFORM_SCENARIO)]) == 0
    assert capsys.readouterr().out.strip() == "wait at stop 1 until t=0.2000 h; expected 0.5000 h"


def test_decide_deterministic(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, distribution={"kind": "deterministic", "t_b": 0.3})
    assert main(["decide", "--config", scenario_path(scenario)]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "wait (bus arrives 0.3000 h; bus total 0.4000 h < walk 0.5000 h)"


def test_decide_deterministic_walks_when_bus_is_late(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, distribution={"kind": "deterministic", "t_b": 0.5})
    assert main(["decide", "--config", scenario_path(scenario)]) == 0
    assert capsys.readouterr().out.startswith("walk (walk 0.5000 h < bus total 0.6000 h)")


def test_decide_with_deadline(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, deadline=0.6)
    assert main(["decide", "--config", scenario_path(scenario)]) == 0
    out = capsys.readouterr().out
    assert "t_w*=0.1000" in out
    assert "t_w'=0.1000" in out
    assert "expected 0.5100 h" in out


def test_decide_infeasible_deadline(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, deadline=0.4)
    assert main(["decide", "--config", scenario_path(scenario)]) == 2
    assert "infeasible" in capsys.readouterr().err


def test_solve_uniform(scenario_path, capsys):
    assert main(["solve", "--config", scenario_path(UNIFORM_SCENARIO)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("WaitUntil 0.200000000 residual")
    assert "sign_changes=1" in out


def test_solve_walk_now(scenario_path, capsys):
    # near-walking-speed bus with a support below the time the ride saves
    scenario = {
        "route": {"stops": [0, 2.0]},
        "traveler": {"v_w": 4, "v_b": 4.2},
        "distribution": {"kind": "uniform", "t_b": 0.01},
    }
    assert main(["solve", "--config", scenario_path(scenario)]) == 0
    assert capsys.readouterr().out.startswith("WalkNow")


def test_solve_wait_for_bus(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, distribution={"kind": "uniform", "t_b": 1.0})
    assert main(["solve", "--config", scenario_path(scenario)]) == 0
    assert capsys.readouterr().out.startswith("WaitForBus")


def test_solve_failure_exit_code(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, distribution={"kind": "exponential", "rate": 1e-7})
    assert main(["solve", "--config", scenario_path(scenario)]) == 3
    assert "solver failure" in capsys.readouterr().err


def test_simulate_csv_and_determinism(scenario_path, tmp_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    out_a, out_b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    argv = ["simulate", "--config", path, "--strategies", "walk,waitbus",
            "--trials", "20000", "--seed", "7"]
    assert main(argv + ["--out", out_a]) == 0
    assert main(argv + ["--out", out_b]) == 0
    capsys.readouterr()
    bytes_a = open(out_a, "rb").read()
    assert bytes_a == open(out_b, "rb").read()
    lines = bytes_a.decode().splitlines()
    assert lines[0] == "strategy,stop,tau,n_trials,seed,mean_time,stderr"
    # walk, waitbus, plus the planner's wait-then-walk recommendation
    assert len(lines) == 4
    by_name = {line.split(",")[0]: line for line in lines[1:]}
    assert set(by_name) == {"walk", "waitbus", "wait"}
    assert float(by_name["waitbus"].split(",")[5]) == pytest.approx(0.35, abs=0.01)
    assert float(by_name["walk"].split(",")[5]) == 0.5


def test_simulate_json_format(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["simulate", "--config", path, "--strategies", "walk",
                 "--trials", "100", "--seed", "1", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert {r["strategy"]["kind"] for r in payload} == {"walk", "wait"}


def test_simulate_single_trial_stderr_na(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["simulate", "--config", path, "--strategies", "waitbus",
                 "--trials", "1", "--seed", "1", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    waitbus_row = next(r for r in rows if r.startswith("waitbus"))
    assert waitbus_row.split(",")[6] == "NA"


def test_simulate_bad_strategy_token(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["simulate", "--config", path, "--strategies", "teleport"]) == 2
    assert "unknown strategy" in capsys.readouterr().err


def test_sweep_t_b_slope(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["sweep", "--config", path, "--param", "t_b",
                 "--start", "0.1", "--stop", "1.0", "--steps", "10"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == SWEEP_CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 10
    interior = [(float(r[1]), float(r[3])) for r in rows if r[2] == "WaitUntil"]
    assert len(interior) >= 2
    for (t0, w0), (t1, w1) in zip(interior, interior[1:]):
        assert (w1 - w0) / (t1 - t0) == pytest.approx(2.0, abs=1e-6)
    # variant bands are contiguous: WalkNow for small t_b, then WaitUntil,
    # then WaitForBus
    variants = [r[2] for r in rows]
    order = {"WalkNow": 0, "WaitUntil": 1, "WaitForBus": 2}
    assert sorted(variants, key=lambda v: order[v]) == variants


def test_sweep_d_variant_transitions(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["sweep", "--config", path, "--param", "d",
                 "--start", "0.1", "--stop", "4.0", "--steps", "40"]) == 0
    rows = [line.split(",") for line in capsys.readouterr().out.strip().splitlines()[1:]]
    variants = [r[2] for r in rows]
    # longer legs raise the stakes of a failed wait: ride-preferring first,
    # then an interior threshold, then walking; each band contiguous
    order = {"WaitForBus": 0, "WaitUntil": 1, "WalkNow": 2}
    assert sorted(variants, key=lambda v: order[v]) == variants
    assert set(variants) == {"WaitForBus", "WaitUntil", "WalkNow"}


def test_sweep_single_point_matches_solve(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["sweep", "--config", path, "--param", "t_b",
                 "--start", "0.5", "--stop", "0.5", "--steps", "1"]) == 0
    row = capsys.readouterr().out.strip().splitlines()[1].split(",")
    assert row[2] == "WaitUntil"
    assert float(row[3]) == pytest.approx(0.2, abs=1e-9)
    assert float(row[5]) == pytest.approx(0.5, abs=1e-9)


def test_sweep_parameter_absent_from_variant(scenario_path, capsys):
    path = scenario_path(UNIFORM_SCENARIO)
    assert main(["sweep", "--config", path, "--param", "rate",
                 "--start", "1", "--stop", "2", "--steps", "2"]) == 2
    assert "requires an exponential" in capsys.readouterr().err


def test_sweep_rejects_point_mass(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, distribution={"kind": "deterministic", "t_b": 0.3})
    assert main(["sweep", "--config", scenario_path(scenario), "--param", "d",
                 "--start", "1", "--stop", "2", "--steps", "2"]) == 2


def test_missing_config_file_is_usage_error(capsys):
    assert main(["solve", "--config", "/nonexistent/scenario.json"]) == 2


def test_wrong_field_type_is_usage_error(scenario_path, capsys):
    scenario = dict(UNIFORM_SCENARIO, traveler={"v_w": [1, 2], "v_b": 20})
    assert main(["solve", "--config", scenario_path(scenario)]) == 2


def test_malformed_json_is_usage_error(scenario_path, tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["solve", "--config", str(path)]) == 2


def test_bad_flags_exit_two():
    assert main(["simulate"]) == 2  # --config is required
    assert main(["sweep", "--config", "x.json", "--param", "speed",
                 "--start", "0", "--stop", "1", "--steps", "2"]) == 2


def test_csv_identical_across_kernel_backends(scenario_path, tmp_path):
    """Simulation output must not depend on which kernel got selected."""
    import os

    path = scenario_path(UNIFORM_SCENARIO)
    argv = ["-m", "walkwait", "simulate", "--config", path, "--strategies",
            "walk,waitbus,wait:0.15", "--trials", "50000", "--seed", "99"]
    outs = []
    for env_value in ("0", "1"):
        out = tmp_path / f"backend_{env_value}.csv"
        env = dict(os.environ, WALKWAIT_PURE_PYTHON=env_value)
        proc = subprocess.run([sys.executable, *argv, "--out", str(out)],
                              capture_output=True, env=env)
        assert proc.returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point(scenario_path):
    path = scenario_path(UNIFORM_SCENARIO)
    proc = subprocess.run(
        [sys.executable, "-m", "walkwait", "decide", "--config", path],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "wait at stop 1 until t=0.2000 h; expected 0.5000 h"


def test_stdin_config(scenario_path):
    proc = subprocess.run(
        [sys.executable, "-m", "walkwait", "solve", "--config", "-"],
        input=json.dumps(UNIFORM_SCENARIO), capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("WaitUntil")
