"""Command line front end.

Four subcommands: eval-fn tabulates a mapping over [-1, 1], simulate
runs one trial from a config file, sweep runs a full experiment into an
output directory, replay re-runs a recorded trace. Floats on standard
output are shown with 6 significant digits; files keep full precision.

Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional

from .config import ConfigError, load_trial_setup
from .controller import DragFlickParams, DragFlickState, drag_flick_step, push_release
from .engine import TrialConfig, TrialResult, run_trial
from .harness import load_sweep_spec, run_sweep, write_results
from .rate import RATE_FUNCTIONS, RateParams
from .techniques import ALL_TECHNIQUES, TechniqueParams, technique_family
from .traces import read_trace, write_trace
from .zones import ZONE_VARIANTS, ZoneState, ZoneThresholds, step_zone

OUT_DIR_ENV = "HEADNAV_OUT_DIR"

EVAL_DT_S = 1.0 / 120.0


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures on exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _sig6(value: float) -> float:
    return float(format(value, ".6g"))


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _result_json(result: TrialResult) -> str:
    return json.dumps({
        "trial_time_s": _sig6(result.trial_time_s),
        "total_head_rotation_deg": _sig6(result.total_head_rotation_deg),
        "crossings": result.crossings,
        "additional_attempts": result.additional_attempts,
        "success": result.success,
    })


_BOOL_PARAMS = {"friction_compounding", "additive_unsigned_combine"}


def _parse_params(pairs) -> TechniqueParams:
    """Route --param name=value entries to the parameter group owning the name."""
    groups = {"rate": (RateParams, {}), "zones": (ZoneThresholds, {}),
              "drag": (DragFlickParams, {})}
    owners = {}
    for group, (cls, _) in groups.items():
        for f in dataclasses.fields(cls):
            owners[f.name] = group
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        if not sep or not name or not raw:
            raise ValueError(f"--param expects name=value, got {pair!r}")
        if name not in owners:
            raise ValueError(
                f"unknown parameter {name!r} (expected one of {', '.join(sorted(owners))})")
        if name in _BOOL_PARAMS:
            lowered = raw.lower()
            if lowered in ("1", "true"):
                value = True
            elif lowered in ("0", "false"):
                value = False
            else:
                raise ValueError(f"--param {name} expects true/false, got {raw!r}")
        else:
            value = float(raw)
        groups[owners[name]][1][name] = value
    return TechniqueParams(rate=RateParams(**groups["rate"][1]),
                           zones=ZoneThresholds(**groups["zones"][1]),
                           drag=DragFlickParams(**groups["drag"][1]))


def _cmd_eval_fn(args) -> int:
    if args.technique not in ALL_TECHNIQUES:
        print(f"unknown technique {args.technique!r}; expected one of: "
              f"{', '.join(ALL_TECHNIQUES)}", file=sys.stderr)
        return 1
    if args.grid < 1:
        print(f"grid must be at least 1, got {args.grid}", file=sys.stderr)
        return 1
    try:
        params = _parse_params(args.param)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    family = technique_family(args.technique)
    n = args.grid
    for i in range(n + 1):
        x = -1.0 + 2.0 * i / n
        if family == "rate":
            y = RATE_FUNCTIONS[args.technique](x, params.rate)
        elif family == "push":
            y = push_release(x, params.rate)
        elif family == "zone":
            # One tick from rest: the technique's instantaneous response.
            state = ZoneState.initial(ZONE_VARIANTS[args.technique])
            _, y = step_zone(state, x, EVAL_DT_S, params.zones)
        else:
            _, y = drag_flick_step(DragFlickState(), x, True, EVAL_DT_S, params.drag)
        print(f"{_fmt(x)},{_fmt(y)}")
    return 0


def _cmd_simulate(args) -> int:
    setup = load_trial_setup(args.config)
    collect = args.trace_out is not None
    result = run_trial(setup.config, setup.operator, setup.technique_params,
                       geometry=setup.geometry, collect_log=collect)
    if collect:
        write_trace(args.trace_out, result.tick_log)
    print(_result_json(result))
    return 0


def _cmd_sweep(args) -> int:
    out_dir = args.out if args.out is not None else os.environ.get(OUT_DIR_ENV)
    if not out_dir:
        print(f"sweep needs --out or {OUT_DIR_ENV} set", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print(f"--jobs must be at least 1, got {args.jobs}", file=sys.stderr)
        return 1
    spec = load_sweep_spec(args.spec)
    rows, summaries, errors = run_sweep(spec, jobs=args.jobs)
    write_results(rows, summaries, out_dir, spec=spec, errors=errors)
    failures = sum(1 for row in rows if not row.success)
    print(f"{len(rows)} trials ({failures} failed) -> {os.path.join(out_dir, 'trials.csv')}")
    return 0


def _cmd_replay(args) -> int:
    if args.config is None and args.technique is None:
        print("replay needs --config or --technique", file=sys.stderr)
        return 1
    try:
        trace = read_trace(args.trace)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.config is not None:
        setup = load_trial_setup(args.config)
        cfg, operator = setup.config, setup.operator
        technique_params, geometry = setup.technique_params, setup.geometry
    else:
        if args.technique not in ALL_TECHNIQUES:
            print(f"unknown technique {args.technique!r}; expected one of: "
                  f"{', '.join(ALL_TECHNIQUES)}", file=sys.stderr)
            return 1
        cfg = TrialConfig(mapping=args.technique)
        operator = None
        technique_params = None
        geometry = None
    result = run_trial(cfg, operator, technique_params, geometry=geometry, replay=trace)
    print(_result_json(result))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="headnav",
        description="Head-gaze workspace navigation simulator.",
        epilog=f"techniques: {', '.join(ALL_TECHNIQUES)}",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("eval-fn", help="tabulate a technique's x -> y mapping",
                       description="Print grid+1 rows of x,y over [-1, 1].")
    p.add_argument("--technique", required=True, metavar="ID")
    p.add_argument("--grid", required=True, type=int, metavar="N")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="override a technique constant (repeatable)")
    p.set_defaults(func=_cmd_eval_fn)

    p = sub.add_parser("simulate", help="run one trial from a config file",
                       description="Run one trial; prints the result as JSON.")
    p.add_argument("--config", required=True, metavar="FILE")
    p.add_argument("--trace-out", metavar="FILE",
                   help="also write the per-tick log as CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="run a full experiment sweep",
                       description="Run every trial of a sweep spec into a directory.")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--out", metavar="DIR",
                   help=f"output directory (default: ${OUT_DIR_ENV})")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="worker processes (default 1; results identical)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("replay", help="re-run a recorded trace",
                       description="Drive a trial from a recorded trace; prints JSON.")
    p.add_argument("--trace", required=True, metavar="FILE")
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--technique", metavar="ID",
                   help="technique id when no config file is given")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if getattr(args, "func", None) is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
