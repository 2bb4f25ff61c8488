"""Head-gaze navigation on a wall-sized curved display: mappings, trials, sweeps.

The package simulates moving a 360 degree virtual workspace behind a
fixed physical window by rotating the head (or, as baselines, a tracked
hand controller). Seven head techniques and two controller baselines
share one closed-loop trial engine driven by a synthetic operator; the
harness reproduces full factorial and marker-cluster experiment designs
deterministically.

The engine runs on a compiled kernel when the extension is built and on
a pure-Python twin otherwise; both produce bit-identical results (set
HEADNAV_BACKEND=pure or =compiled to force one).
"""

from .config import ConfigError, TrialSetup, load_trial_setup
from .controller import (DEFAULT_DRAG_PARAMS, DragFlickParams, DragFlickState,
                         DragPhase, drag_flick_step, push_release)
from .core import BACKEND
from .engine import (CLOCK_STARTS, SIDES, TICK_LOG_COLUMNS, ButtonEvent,
                     Containment, TickRecord, TrialConfig, TrialResult,
                     button_events, containment, containment_thresholds,
                     count_crossing, initial_target_deg, integrate, run_trial)
from .geometry import (DEG_PER_RAD, DisplayGeometry, angle_to_arc,
                       arc_to_angle, normalize_yaw, wrap_signed, wrap_workspace)
from .harness import (TRIALS_COLUMNS, ClusterScenario, SummaryRow, SweepSpec,
                      TrialRow, cluster_markers, derive_seed, expand,
                      load_sweep_spec, read_results, run_sweep, summarize,
                      write_results)
from .operators import (DEFAULT_OPERATOR_PARAMS, Operator, OperatorAction,
                        OperatorParams, TrialObservation, make_yaw_noise,
                        plan_flick_dwell)
from .rate import (DEFAULT_RATE_PARAMS, RATE_FUNCTIONS, RateParams, linear,
                   polynomial, sigmoid)
from .techniques import (ALL_TECHNIQUES, CONTROLLER_TECHNIQUES,
                         DEFAULT_TECHNIQUE_PARAMS, HEAD_TECHNIQUES,
                         RATE_TECHNIQUES, ZONE_TECHNIQUES, TechniqueParams,
                         technique_family)
from .traces import INPUT_LOG_COLUMNS, ReplayTrace, read_trace, write_trace
from .zones import (DEFAULT_ZONE_THRESHOLDS, ZONE_VARIANTS, Zone, ZoneKind,
                    ZoneState, ZoneThresholds, ZoneVariant, classify,
                    flick_speed, step_zone)

__version__ = "0.1.0"

__all__ = [
    "ALL_TECHNIQUES", "BACKEND", "ButtonEvent", "CLOCK_STARTS",
    "CONTROLLER_TECHNIQUES", "ClusterScenario", "ConfigError", "Containment",
    "DEFAULT_DRAG_PARAMS", "DEFAULT_OPERATOR_PARAMS", "DEFAULT_RATE_PARAMS",
    "DEFAULT_TECHNIQUE_PARAMS", "DEFAULT_ZONE_THRESHOLDS", "DEG_PER_RAD",
    "DisplayGeometry", "DragFlickParams", "DragFlickState", "DragPhase",
    "HEAD_TECHNIQUES", "INPUT_LOG_COLUMNS", "Operator", "OperatorAction",
    "OperatorParams", "RATE_FUNCTIONS", "RATE_TECHNIQUES", "RateParams",
    "ReplayTrace", "SIDES", "SummaryRow", "SweepSpec", "TICK_LOG_COLUMNS",
    "TRIALS_COLUMNS", "TechniqueParams", "TickRecord", "TrialConfig",
    "TrialObservation", "TrialResult", "TrialRow", "TrialSetup",
    "ZONE_TECHNIQUES", "ZONE_VARIANTS", "Zone", "ZoneKind", "ZoneState",
    "ZoneThresholds", "ZoneVariant", "angle_to_arc", "arc_to_angle",
    "button_events", "classify", "cluster_markers", "containment",
    "containment_thresholds", "count_crossing", "derive_seed", "drag_flick_step",
    "expand", "flick_speed", "initial_target_deg", "integrate", "linear",
    "load_sweep_spec", "load_trial_setup", "make_yaw_noise", "normalize_yaw",
    "plan_flick_dwell", "polynomial", "push_release", "read_results",
    "read_trace", "run_sweep", "run_trial", "sigmoid", "step_zone",
    "summarize", "technique_family", "wrap_signed", "wrap_workspace",
    "write_results", "write_trace",
]
