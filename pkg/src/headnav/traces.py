"""Trace files: writing tick logs and reading them (or raw input logs) back.

Two CSV schemas are accepted for replay. The full tick log as written by
write_trace (TICK_LOG_COLUMNS) replays bit-exactly because the normalized
input x_norm is reused as-is. A minimal input log with columns
time_s, yaw_deg, controller_velocity, joystick, button covers externally
recorded traces; its controller velocity is raw degrees per second and is
normalized once on load. Floats are written with repr, so parsing them
back recovers the exact doubles.
"""

from __future__ import annotations

import csv
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .engine import TICK_LOG_COLUMNS, TickRecord

INPUT_LOG_COLUMNS = ("time_s", "yaw_deg", "controller_velocity", "joystick", "button")


class ReplayTrace(NamedTuple):
    """Parsed replay input; x_norm is present only for tick-log traces."""

    yaw_deg: np.ndarray
    button: np.ndarray
    x_norm: Optional[np.ndarray] = None
    controller_velocity: Optional[np.ndarray] = None
    joystick: Optional[np.ndarray] = None


def write_trace(path, tick_log: Sequence[TickRecord]) -> None:
    """Write a tick log in the fixed engine schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TICK_LOG_COLUMNS)
        for row in tick_log:
            writer.writerow((
                row.tick,
                repr(row.time_s),
                repr(row.yaw_deg),
                repr(row.x_norm),
                row.zone_or_phase,
                repr(row.y_norm),
                repr(row.workspace_deg),
                row.containment,
                row.button,
                row.event,
            ))


def _parse_button(value: str, line: int) -> int:
    text = value.strip().lower()
    if text in ("1", "true"):
        return 1
    if text in ("0", "false"):
        return 0
    raise ValueError(f"line {line}: button must be 0/1/true/false, got {value!r}")


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"line {line}: column {column} is not a number: {value!r}") from None


def read_trace(path) -> ReplayTrace:
    """Load a replay trace, accepting either CSV schema by its header."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty trace file") from None
        header = tuple(h.strip() for h in header)
        rows = [row for row in reader if row]
    if header == TICK_LOG_COLUMNS:
        yaw, x_norm, button = [], [], []
        for i, row in enumerate(rows, start=2):
            if len(row) != len(TICK_LOG_COLUMNS):
                raise ValueError(
                    f"line {i}: expected {len(TICK_LOG_COLUMNS)} columns, got {len(row)}")
            yaw.append(_parse_float(row[2], "yaw_deg", i))
            x_norm.append(_parse_float(row[3], "x_norm", i))
            button.append(_parse_button(row[8], i))
        return ReplayTrace(
            yaw_deg=np.asarray(yaw, dtype=np.float64),
            button=np.asarray(button, dtype=np.uint8),
            x_norm=np.asarray(x_norm, dtype=np.float64),
        )
    if header == INPUT_LOG_COLUMNS:
        yaw, ctrl, joy, button = [], [], [], []
        for i, row in enumerate(rows, start=2):
            if len(row) != len(INPUT_LOG_COLUMNS):
                raise ValueError(
                    f"line {i}: expected {len(INPUT_LOG_COLUMNS)} columns, got {len(row)}")
            yaw.append(_parse_float(row[1], "yaw_deg", i))
            ctrl.append(_parse_float(row[2], "controller_velocity", i))
            joy.append(_parse_float(row[3], "joystick", i))
            button.append(_parse_button(row[4], i))
        return ReplayTrace(
            yaw_deg=np.asarray(yaw, dtype=np.float64),
            button=np.asarray(button, dtype=np.uint8),
            controller_velocity=np.asarray(ctrl, dtype=np.float64),
            joystick=np.asarray(joy, dtype=np.float64),
        )
    raise ValueError(
        f"{path}: unrecognized trace header {','.join(header)!r}; expected the "
        f"tick-log schema ({','.join(TICK_LOG_COLUMNS)}) or the input-log schema "
        f"({','.join(INPUT_LOG_COLUMNS)})")
