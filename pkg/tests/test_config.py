import json

import pytest

from headnav.config import (ConfigError, TrialSetup, build_dataclass,
                            build_technique_params, load_trial_setup)
from headnav.engine import TrialConfig
from headnav.rate import RateParams


def _write(tmp_path, data):
    path = tmp_path / "trial.json"
    path.write_text(json.dumps(data))
    return path


def test_minimal_trial_setup(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "polynomial"}})
    setup = load_trial_setup(path)
    assert isinstance(setup, TrialSetup)
    assert setup.config.mapping == "polynomial"
    assert setup.config.window_arc_cm == 600.0
    assert setup.operator.strategy == "greedy_saturate"
    assert setup.geometry.radius_cm == 327.0


def test_full_setup_round_trip(tmp_path):
    path = _write(tmp_path, {
        "schema_version": 1,
        "trial": {"mapping": "friction", "window_arc_cm": 800.0,
                  "target_distance_cm": 500.0, "side": "left", "seed": 7,
                  "budget_s": 60.0, "clock_start": "movement"},
        "operator": {"yaw_noise_sd_deg": 0.0, "strategy": "proportional",
                     "seed": 3},
        "technique_params": {"zones": {"friction_mu": 0.05},
                             "rate": {"exponent": 3.0}},
        "geometry": {"radius_cm": 300.0},
    })
    setup = load_trial_setup(path)
    assert setup.config.side == "left"
    assert setup.config.clock_start == "movement"
    assert setup.operator.strategy == "proportional"
    assert setup.operator.seed == 3
    assert setup.technique_params.zones.friction_mu == 0.05
    assert setup.technique_params.rate.exponent == 3.0
    assert setup.technique_params.drag.gain == 1.0   # untouched group keeps defaults
    assert setup.geometry.radius_cm == 300.0


def test_markers_list_becomes_tuple(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "linear",
                                       "markers_deg": [10.0, 50.0],
                                       "visit_order": [1, 0]}})
    setup = load_trial_setup(path)
    assert setup.config.markers_deg == (10.0, 50.0)
    assert setup.config.visit_order == (1, 0)


def test_unknown_field_names_dotted_path(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "linear", "windw_arc_cm": 800}})
    with pytest.raises(ConfigError, match=r"trial\.windw_arc_cm: unknown field"):
        load_trial_setup(path)


def test_unknown_section_rejected(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "linear"}, "trail": {}})
    with pytest.raises(ConfigError, match=r"\.trail: unknown section"):
        load_trial_setup(path)


def test_missing_trial_section(tmp_path):
    path = _write(tmp_path, {"operator": {}})
    with pytest.raises(ConfigError, match=r"\.trial: required section is missing"):
        load_trial_setup(path)


def test_nested_object_rejected(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "linear",
                                       "seed": {"value": 3}}})
    with pytest.raises(ConfigError, match=r"trial\.seed: nested objects"):
        load_trial_setup(path)


def test_bad_schema_version(tmp_path):
    path = _write(tmp_path, {"schema_version": 2, "trial": {"mapping": "linear"}})
    with pytest.raises(ConfigError, match="unsupported version 2"):
        load_trial_setup(path)


def test_invalid_json_reports_path(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_trial_setup(path)


def test_constructor_errors_become_config_errors(tmp_path):
    path = _write(tmp_path, {"trial": {"mapping": "linear",
                                       "frame_width_cm": 20.0,
                                       "target_width_cm": 30.0}})
    with pytest.raises(ConfigError, match="trial:"):
        load_trial_setup(path)


def test_technique_params_unknown_group():
    with pytest.raises(ConfigError, match=r"technique_params\.rte: unknown group"):
        build_technique_params({"rte": {}}, "technique_params")


def test_build_dataclass_direct():
    params = build_dataclass(RateParams, {"exponent": 2.5}, "rate")
    assert params.exponent == 2.5
    assert params.dead_zone == 0.11
    with pytest.raises(ConfigError, match=r"rate: "):
        build_dataclass(RateParams, {"dead_zone": -1.0}, "rate")
    with pytest.raises(ConfigError, match="expected an object"):
        build_dataclass(TrialConfig, ["linear"], "trial")


def test_bundled_example_config_loads():
    setup = load_trial_setup("configs/study1_poly_800_500.json")
    assert setup.config.mapping == "polynomial"
    assert setup.config.window_arc_cm == 800.0
    assert setup.config.target_distance_cm == 500.0
    assert setup.config.seed == 7
