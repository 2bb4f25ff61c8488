import json
import os
import subprocess
import sys

CLI = (sys.executable, "-m", "headnav.cli")


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([*CLI, *args], capture_output=True, text=True,
                          env=env, cwd=cwd)


def test_help_lists_all_techniques():
    proc = run_cli("--help")
    assert proc.returncode == 0
    for name in ("linear", "sigmoid", "polynomial", "continuous", "friction",
                 "additive", "interrupted", "drag_flick", "push_release"):
        assert name in proc.stdout


def test_eval_fn_polynomial_grid():
    proc = run_cli("eval-fn", "--technique", "polynomial", "--grid", "4")
    assert proc.returncode == 0
    # grid N covers [-1, 1] in N steps, N + 1 rows
    assert proc.stdout.splitlines() == ["-1,-1", "-0.5,-0.25", "0,0",
                                        "0.5,0.25", "1,1"]


def test_eval_fn_linear_endpoints():
    proc = run_cli("eval-fn", "--technique", "linear", "--grid", "2")
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["-1,-1", "0,0", "1,1"]


def test_eval_fn_param_override():
    cubed = run_cli("eval-fn", "--technique", "polynomial", "--grid", "4",
                    "--param", "exponent=3.0")
    assert cubed.returncode == 0
    assert cubed.stdout.splitlines()[1] == "-0.5,-0.125"
    wide = run_cli("eval-fn", "--technique", "linear", "--grid", "4",
                   "--param", "dead_zone=0.6")
    assert wide.returncode == 0
    # |x| = 0.5 now falls inside the widened dead zone
    assert wide.stdout.splitlines()[1] == "-0.5,0"


def test_eval_fn_zone_and_drag_rows():
    zones = run_cli("eval-fn", "--technique", "continuous", "--grid", "10")
    assert zones.returncode == 0
    rows = zones.stdout.splitlines()
    assert rows[5] == "0,0"                 # stop zone
    assert rows[6] == "0.2,0.1"             # constant zone creep, one tick in
    assert rows[4] == "-0.2,-0.1"
    assert rows[8] == "0.6,0"               # flick straight from rest is dead
    drag = run_cli("eval-fn", "--technique", "drag_flick", "--grid", "2")
    assert drag.returncode == 0
    # button held: the drag branch passes x straight through
    assert drag.stdout.splitlines() == ["-1,-1", "0,0", "1,1"]


def test_eval_fn_rejects_bad_input():
    unknown = run_cli("eval-fn", "--technique", "warp", "--grid", "3")
    assert unknown.returncode == 1
    assert "warp" in unknown.stderr
    zero = run_cli("eval-fn", "--technique", "linear", "--grid", "0")
    assert zero.returncode == 1
    badparam = run_cli("eval-fn", "--technique", "linear", "--grid", "3",
                       "--param", "dead_zone=maybe")
    assert badparam.returncode == 1
    noparam = run_cli("eval-fn", "--technique", "linear", "--grid", "3",
                      "--param", "zoom=1.0")
    assert noparam.returncode == 1
    missing = run_cli("eval-fn", "--technique", "linear")
    assert missing.returncode == 1


def test_simulate_bundled_config_deterministic():
    a = run_cli("simulate", "--config", "configs/study1_poly_800_500.json",
                cwd=os.getcwd())
    b = run_cli("simulate", "--config", "configs/study1_poly_800_500.json",
                cwd=os.getcwd())
    assert a.returncode == 0
    assert a.stdout == b.stdout
    result = json.loads(a.stdout)
    assert result["success"] is True
    assert set(result) == {"trial_time_s", "total_head_rotation_deg",
                           "crossings", "additional_attempts", "success"}


def test_simulate_missing_config_is_config_error():
    proc = run_cli("simulate", "--config", "/nonexistent/trial.json")
    assert proc.returncode == 2
    assert "config error" in proc.stderr


def test_simulate_invalid_config_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"trial": {"mapping": "warp"}}')
    proc = run_cli("simulate", "--config", str(path))
    assert proc.returncode == 2
    assert "mapping" in proc.stderr


def test_simulate_trace_out_then_replay(tmp_path):
    trace = tmp_path / "trace.csv"
    sim = run_cli("simulate", "--config", "configs/study1_poly_800_500.json",
                  "--trace-out", str(trace), cwd=os.getcwd())
    assert sim.returncode == 0
    header = trace.read_text().splitlines()[0]
    assert header == ("tick,time_s,yaw_deg,x_norm,zone_or_phase,y_norm,"
                      "workspace_deg,containment,button,event")
    rep = run_cli("replay", "--trace", str(trace),
                  "--config", "configs/study1_poly_800_500.json", cwd=os.getcwd())
    assert rep.returncode == 0
    assert json.loads(rep.stdout) == json.loads(sim.stdout)


def test_replay_with_technique_flag(tmp_path):
    # --technique replays against an all-default trial, so record one first
    cfg = tmp_path / "default.json"
    cfg.write_text('{"trial": {"mapping": "polynomial"}}')
    trace = tmp_path / "trace.csv"
    sim = run_cli("simulate", "--config", str(cfg), "--trace-out", str(trace))
    assert sim.returncode == 0
    rep = run_cli("replay", "--trace", str(trace), "--technique", "polynomial")
    assert rep.returncode == 0
    assert json.loads(rep.stdout) == json.loads(sim.stdout)
    noid = run_cli("replay", "--trace", str(trace))
    assert noid.returncode == 1
    badid = run_cli("replay", "--trace", str(trace), "--technique", "warp")
    assert badid.returncode == 1


def test_replay_garbage_trace(tmp_path):
    trace = tmp_path / "junk.csv"
    trace.write_text("a,b\n1,2\n")
    proc = run_cli("replay", "--trace", str(trace), "--technique", "linear")
    assert proc.returncode == 2


def _tiny_sweep_json(path):
    path.write_text(json.dumps({
        "techniques": ["polynomial", "push_release"],
        "windows_cm": [600.0],
        "distances_cm": [500.0],
        "repetitions": 2,
        "base_seed": 5,
    }))


def test_sweep_writes_results_and_reruns_identically(tmp_path):
    spec = tmp_path / "sweep.json"
    _tiny_sweep_json(spec)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    a = run_cli("sweep", "--spec", str(spec), "--out", str(out1))
    b = run_cli("sweep", "--spec", str(spec), "--out", str(out2), "--jobs", "2")
    assert a.returncode == 0 and b.returncode == 0
    assert "4 trials" in a.stdout
    assert (out1 / "trials.csv").read_bytes() == (out2 / "trials.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()
    summary = json.loads((out1 / "summary.json").read_text())
    assert summary["n_trials"] == 4
    assert summary["failures"] == []


def test_sweep_out_dir_from_environment(tmp_path):
    spec = tmp_path / "sweep.json"
    _tiny_sweep_json(spec)
    out = tmp_path / "fromenv"
    proc = run_cli("sweep", "--spec", str(spec),
                   env_extra={"HEADNAV_OUT_DIR": str(out)})
    assert proc.returncode == 0
    assert (out / "trials.csv").exists()


def test_sweep_without_out_dir_fails():
    env = dict(os.environ)
    env.pop("HEADNAV_OUT_DIR", None)
    proc = subprocess.run([*CLI, "sweep", "--spec", "configs/study1_design.json"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 1


def test_unknown_subcommand_fails():
    proc = run_cli("frobnicate")
    assert proc.returncode == 1
    assert "usage" in proc.stderr.lower()


def test_console_script_installed():
    proc = subprocess.run(["headnav", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "eval-fn" in proc.stdout
