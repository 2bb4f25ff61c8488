"""Experiment runner: sweep expansion, scheduling, statistics, persistence.

A sweep is either a factorial design (technique x window x distance x
repetition, sides alternating per repetition) or a marker-cluster design
(technique x window x cluster x visit-order permutation). Expansion order
is deterministic lexicographic in the order fields are given; per-trial
seeds are derived as sha256("{base_seed}:{trial_index}") so archived
specs reproduce archived results byte for byte regardless of worker
count.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import math
import multiprocessing
import os
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from .config import (ConfigError, build_dataclass, build_technique_params,
                     check_schema_version, load_json)
from .engine import TrialConfig, run_trial
from .geometry import DisplayGeometry, angle_to_arc, arc_to_angle, wrap_signed, wrap_workspace
from .operators import OperatorParams
from .techniques import ALL_TECHNIQUES, TechniqueParams

RESULTS_SCHEMA_VERSION = 1

TRIALS_COLUMNS = ("trial_id", "technique", "window_cm", "distance_cm", "side", "seed",
                  "trial_time_s", "head_rotation_deg", "crossings",
                  "additional_attempts", "success")

MEASURES = ("trial_time_s", "head_rotation_deg", "crossings", "additional_attempts")


@dataclass(frozen=True)
class ClusterScenario:
    """Markers on the workspace, given as gaps between consecutive ones.

    The markers are centered opposite the frame (around 180 degrees) so
    every one starts off-window; trials visit them in per-trial order.
    """

    name: str
    separations_deg: tuple

    def __post_init__(self) -> None:
        if not (isinstance(self.name, str) and self.name):
            raise ValueError(f"cluster name must be a nonempty string, got {self.name!r}")
        seps = tuple(float(s) for s in self.separations_deg)
        if not seps:
            raise ValueError("separations_deg must not be empty")
        for s in seps:
            if not (math.isfinite(s) and s > 0.0):
                raise ValueError(f"separations must be positive, got {s!r}")
        if sum(seps) >= 360.0:
            raise ValueError(f"separations must sum below 360 degrees, got {sum(seps)!r}")
        object.__setattr__(self, "separations_deg", seps)

    @property
    def span_deg(self) -> float:
        return sum(self.separations_deg)


def cluster_markers(scenario: ClusterScenario) -> tuple:
    """Marker workspace angles, first to last."""
    start = wrap_workspace(180.0 - scenario.span_deg / 2.0)
    positions = [wrap_workspace(start)]
    acc = start
    for sep in scenario.separations_deg:
        acc = acc + sep
        positions.append(wrap_workspace(acc))
    return tuple(positions)


@dataclass(frozen=True)
class SweepSpec:
    """A full experiment; see expand() for the trial order."""

    techniques: tuple
    windows_cm: tuple
    distances_cm: tuple = ()
    repetitions: int = 8
    operator: OperatorParams = OperatorParams()
    technique_params: TechniqueParams = TechniqueParams()
    base_seed: int = 0
    clusters: tuple = ()
    budget_s: float = 120.0
    tick_hz: int = 120
    clock_start: str = "press"

    def __post_init__(self) -> None:
        techniques = tuple(self.techniques)
        if not techniques:
            raise ValueError("techniques must not be empty")
        for tech in techniques:
            if tech not in ALL_TECHNIQUES:
                raise ValueError(
                    f"unknown technique {tech!r}; expected one of {', '.join(ALL_TECHNIQUES)}")
        object.__setattr__(self, "techniques", techniques)
        windows = tuple(float(w) for w in self.windows_cm)
        if not windows or any(not (math.isfinite(w) and w > 0) for w in windows):
            raise ValueError(f"windows_cm must be nonempty and positive, got {self.windows_cm!r}")
        object.__setattr__(self, "windows_cm", windows)
        distances = tuple(float(d) for d in self.distances_cm)
        if any(not (math.isfinite(d) and d > 0) for d in distances):
            raise ValueError(f"distances_cm must be positive, got {self.distances_cm!r}")
        object.__setattr__(self, "distances_cm", distances)
        clusters = tuple(self.clusters)
        object.__setattr__(self, "clusters", clusters)
        if not clusters:
            if not distances:
                raise ValueError("distances_cm must not be empty without clusters")
            if self.repetitions <= 0 or self.repetitions % 2 != 0:
                raise ValueError(
                    f"repetitions must be positive and even to balance sides, "
                    f"got {self.repetitions!r}")
        if not isinstance(self.base_seed, int):
            raise ValueError(f"base_seed must be an integer, got {self.base_seed!r}")


def derive_seed(base_seed: int, trial_index: int) -> int:
    """Stable per-trial seed: the first 8 bytes of sha256("{base}:{index}")."""
    digest = hashlib.sha256(f"{base_seed}:{trial_index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def _check_off_window(cfg: TrialConfig, geometry: DisplayGeometry, label: str) -> None:
    window_angle = arc_to_angle(cfg.window_arc_cm, geometry)
    target_angle = arc_to_angle(cfg.target_width_cm, geometry)
    if cfg.markers_deg is not None:
        for marker in cfg.markers_deg:
            if abs(wrap_signed(marker)) - target_angle / 2.0 <= window_angle / 2.0:
                raise ConfigError(
                    f"{label}: marker at {marker} deg starts on-window for the "
                    f"{cfg.window_arc_cm} cm window")
    else:
        distance_angle = arc_to_angle(cfg.target_distance_cm, geometry)
        if distance_angle - target_angle / 2.0 <= window_angle / 2.0:
            raise ConfigError(
                f"{label}: target at {cfg.target_distance_cm} cm starts on-window "
                f"for the {cfg.window_arc_cm} cm window")


def expand(spec: SweepSpec) -> list:
    """All trial configs of the sweep, in deterministic order."""
    geometry = DisplayGeometry()
    configs = []
    index = 0
    if spec.clusters:
        for tech in spec.techniques:
            for window in spec.windows_cm:
                for scenario in spec.clusters:
                    markers = cluster_markers(scenario)
                    span_arc = angle_to_arc(scenario.span_deg, geometry)
                    for perm in itertools.permutations(range(len(markers))):
                        cfg = TrialConfig(
                            mapping=tech,
                            window_arc_cm=window,
                            target_distance_cm=span_arc,
                            side="right",
                            seed=derive_seed(spec.base_seed, index),
                            budget_s=spec.budget_s,
                            tick_hz=spec.tick_hz,
                            clock_start=spec.clock_start,
                            markers_deg=markers,
                            visit_order=perm,
                        )
                        _check_off_window(cfg, geometry,
                                          f"cluster {scenario.name} x {tech}")
                        configs.append(cfg)
                        index += 1
    else:
        for tech in spec.techniques:
            for window in spec.windows_cm:
                for distance in spec.distances_cm:
                    for rep in range(spec.repetitions):
                        cfg = TrialConfig(
                            mapping=tech,
                            window_arc_cm=window,
                            target_distance_cm=distance,
                            side="left" if rep % 2 == 0 else "right",
                            seed=derive_seed(spec.base_seed, index),
                            budget_s=spec.budget_s,
                            tick_hz=spec.tick_hz,
                            clock_start=spec.clock_start,
                        )
                        _check_off_window(
                            cfg, geometry,
                            f"technique {tech} x window {window} x distance {distance}")
                        configs.append(cfg)
                        index += 1
    return configs


class TrialRow(NamedTuple):
    """One trials.csv row; column order matches TRIALS_COLUMNS."""

    trial_id: int
    technique: str
    window_cm: float
    distance_cm: float
    side: str
    seed: int
    trial_time_s: float
    head_rotation_deg: float
    crossings: int
    additional_attempts: int
    success: int


@dataclass(frozen=True)
class SummaryRow:
    """Per-(technique, window, distance) statistics over all four measures."""

    technique: str
    window_cm: float
    distance_cm: float
    n: int
    success_rate: float
    measures: dict


def _run_one(payload):
    cfg, operator, technique_params = payload
    try:
        result = run_trial(cfg, operator, technique_params)
        return ("ok", result)
    except Exception as exc:  # recorded, never aborts the sweep
        return ("error", f"{type(exc).__name__}: {exc}")


def run_sweep(spec: SweepSpec, jobs: int = 1):
    """Run every trial of the sweep; returns (trial rows, summary rows).

    Output is independent of jobs: trials are seeded individually and
    results are ordered by trial index.
    """
    if not (isinstance(jobs, int) and jobs >= 1):
        raise ValueError(f"jobs must be a positive integer, got {jobs!r}")
    configs = expand(spec)
    payloads = [(cfg, spec.operator, spec.technique_params) for cfg in configs]
    if jobs == 1:
        outcomes = [_run_one(p) for p in payloads]
    else:
        with multiprocessing.Pool(jobs) as pool:
            outcomes = pool.map(_run_one, payloads)
    rows = []
    errors = {}
    for i, (cfg, (status, value)) in enumerate(zip(configs, outcomes)):
        side = "-" if cfg.markers_deg is not None else cfg.side
        if status == "ok":
            rows.append(TrialRow(i, cfg.mapping, float(cfg.window_arc_cm),
                                 float(cfg.target_distance_cm), side, cfg.seed,
                                 value.trial_time_s, value.total_head_rotation_deg,
                                 value.crossings, value.additional_attempts,
                                 1 if value.success else 0))
        else:
            errors[i] = value
            rows.append(TrialRow(i, cfg.mapping, float(cfg.window_arc_cm),
                                 float(cfg.target_distance_cm), side, cfg.seed,
                                 float(cfg.budget_s), 0.0, 0, 0, 0))
    summaries = summarize(rows)
    return rows, summaries, errors


def summarize(rows: Sequence[TrialRow]) -> list:
    """Group rows by (technique, window, distance) and compute mean/sd/CI95."""
    groups = {}
    for row in rows:
        groups.setdefault((row.technique, row.window_cm, row.distance_cm), []).append(row)
    out = []
    for (tech, window, distance), members in groups.items():
        n = len(members)
        measures = {}
        for name in MEASURES:
            values = np.asarray([getattr(r, name) for r in members], dtype=np.float64)
            mean = float(values.mean())
            if n > 1:
                sd = float(values.std(ddof=1))
                half = float(stats.t.ppf(0.975, n - 1)) * sd / math.sqrt(n)
            else:
                sd = 0.0
                half = 0.0
            measures[name] = {"mean": mean, "sd": sd, "ci95": [mean - half, mean + half]}
        success_rate = float(np.mean([r.success for r in members]))
        out.append(SummaryRow(tech, window, distance, n, success_rate, measures))
    return out


def write_results(rows, summaries, out_dir, spec: Optional[SweepSpec] = None,
                  errors: Optional[dict] = None) -> None:
    """Write trials.csv and summary.json; per-trial rows are the ground truth."""
    os.makedirs(out_dir, exist_ok=True)
    trials_path = os.path.join(out_dir, "trials.csv")
    try:
        with open(trials_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRIALS_COLUMNS)
            for row in rows:
                writer.writerow((
                    row.trial_id, row.technique, repr(row.window_cm),
                    repr(row.distance_cm), row.side, row.seed,
                    repr(row.trial_time_s), repr(row.head_rotation_deg),
                    row.crossings, row.additional_attempts, row.success,
                ))
    except OSError as exc:
        raise OSError(f"cannot write {trials_path}: {exc}") from exc
    payload = {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "n_trials": len(rows),
        "failures": [row.trial_id for row in rows if not row.success],
        "errors": {str(k): v for k, v in (errors or {}).items()},
        "groups": [asdict(summary) for summary in summaries],
    }
    if spec is not None:
        payload["spec"] = asdict(spec)
    summary_path = os.path.join(out_dir, "summary.json")
    try:
        with open(summary_path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {summary_path}: {exc}") from exc


def read_results(out_dir):
    """Read back (rows, summaries) written by write_results, exactly."""
    trials_path = os.path.join(out_dir, "trials.csv")
    with open(trials_path, "r", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != TRIALS_COLUMNS:
            raise ValueError(f"{trials_path}: unexpected header {header!r}")
        rows = []
        for row in reader:
            if not row:
                continue
            rows.append(TrialRow(
                int(row[0]), row[1], float(row[2]), float(row[3]), row[4],
                int(row[5]), float(row[6]), float(row[7]), int(row[8]),
                int(row[9]), int(row[10])))
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "r") as fh:
        payload = json.load(fh)
    summaries = [SummaryRow(g["technique"], g["window_cm"], g["distance_cm"],
                            g["n"], g["success_rate"], g["measures"])
                 for g in payload.get("groups", ())]
    return rows, summaries


def load_sweep_spec(path) -> SweepSpec:
    """Read a sweep spec file (JSON, schema versioned)."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object at the top level")
    check_schema_version(data, str(path))
    known = {"schema_version", "techniques", "windows_cm", "distances_cm",
             "repetitions", "operator", "technique_params", "base_seed",
             "clusters", "budget_s", "tick_hz", "clock_start"}
    for key in data:
        if key not in known:
            raise ConfigError(
                f"{path}.{key}: unknown field (expected one of {', '.join(sorted(known))})")
    for required in ("techniques", "windows_cm"):
        if required not in data:
            raise ConfigError(f"{path}.{required}: required field is missing")
    operator = (build_dataclass(OperatorParams, data["operator"], "operator")
                if "operator" in data else OperatorParams())
    technique_params = (build_technique_params(data["technique_params"], "technique_params")
                        if "technique_params" in data else TechniqueParams())
    clusters = []
    raw_clusters = data.get("clusters", {})
    if not isinstance(raw_clusters, dict):
        raise ConfigError("clusters: expected an object of name -> separations list")
    for name, seps in raw_clusters.items():
        if not isinstance(seps, list):
            raise ConfigError(f"clusters.{name}: expected a list of separations")
        try:
            clusters.append(ClusterScenario(name, tuple(seps)))
        except ValueError as exc:
            raise ConfigError(f"clusters.{name}: {exc}") from None
    try:
        return SweepSpec(
            techniques=tuple(data["techniques"]),
            windows_cm=tuple(data["windows_cm"]),
            distances_cm=tuple(data.get("distances_cm", ())),
            repetitions=data.get("repetitions", 8),
            operator=operator,
            technique_params=technique_params,
            base_seed=data.get("base_seed", 0),
            clusters=tuple(clusters),
            budget_s=data.get("budget_s", 120.0),
            tick_hz=data.get("tick_hz", 120),
            clock_start=data.get("clock_start", "press"),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
