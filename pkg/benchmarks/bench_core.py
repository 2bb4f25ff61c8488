"""Time the compiled trial kernel against the pure-Python reference.

Runs the same set of trials through both backends, checks that every
result is identical, and reports per-trial times plus the speedup.

    python benchmarks/bench_core.py [repeats]
"""

import sys
import time
from dataclasses import replace

from headnav.core import params, pure
from headnav.engine import TrialConfig, containment_thresholds, initial_target_deg
from headnav.geometry import DisplayGeometry
from headnav.operators import OperatorParams
from headnav.techniques import ALL_TECHNIQUES, DEFAULT_TECHNIQUE_PARAMS

try:
    from headnav.core import _compiled
except ImportError:
    _compiled = None


def run_with(kernel, cfg, operator):
    geometry = replace(DisplayGeometry(), window_arc_cm=cfg.window_arc_cm)
    contained, partial = containment_thresholds(cfg, geometry)
    targets = initial_target_deg(cfg, geometry)
    inputs = params.prepare(cfg, operator, DEFAULT_TECHNIQUE_PARAMS, geometry,
                            contained, partial, targets, None, False)
    return kernel(inputs)


def measure(kernel, configs, operator, repeats):
    best = float("inf")
    results = None
    for _ in range(repeats):
        start = time.perf_counter()
        results = [run_with(kernel, cfg, operator) for cfg in configs]
        elapsed = time.perf_counter() - start
        best = min(best, elapsed)
    return best, results


def main() -> int:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    operator = OperatorParams()
    configs = [TrialConfig(mapping=tech, target_distance_cm=dist, seed=seed)
               for tech in ALL_TECHNIQUES
               for seed, dist in enumerate((500.0, 750.0, 1000.0))]
    pure_time, pure_results = measure(pure.run_kernel, configs, operator, repeats)
    print(f"pure:     {pure_time:8.3f} s for {len(configs)} trials "
          f"({1e3 * pure_time / len(configs):7.2f} ms/trial)")
    if _compiled is None:
        print("compiled: not built (pip install -e . builds it)")
        return 1
    comp_time, comp_results = measure(_compiled.run_kernel, configs, operator, repeats)
    print(f"compiled: {comp_time:8.3f} s for {len(configs)} trials "
          f"({1e3 * comp_time / len(configs):7.2f} ms/trial)")
    print(f"speedup:  {pure_time / comp_time:8.1f}x")
    for cfg, a, b in zip(configs, pure_results, comp_results):
        same = (a.trial_time_s == b.trial_time_s
                and a.head_rotation_deg == b.head_rotation_deg
                and a.crossings == b.crossings
                and a.additional_attempts == b.additional_attempts
                and a.success == b.success)
        if not same:
            print(f"MISMATCH on {cfg.mapping} seed {cfg.seed}: {a} != {b}")
            return 1
    print("results:  identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
