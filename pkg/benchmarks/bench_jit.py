#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-Python fallback.

Runs each workload in a subprocess with MIW_DISABLE_NUMBA toggled, so both
paths are measured from a clean import.  JIT compilation happens during the
warm-up call and is excluded from the timings.

Usage:  python3 benchmarks/bench_jit.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = """
import json, time
import numpy as np
from miw import radial, stein, wasser, coupling
from miw._jit import NUMBA_ENABLED

def timed(fn, repeat):
    fn()  # warm-up (includes JIT compile on the compiled path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best

repeat = int(json.loads(input()))
t2 = stein.TiltedGaussianTarget(2)
sol_big = None

def solve_big():
    global sol_big
    sol_big = radial.solve_ground_state(2, 4000)

results = {"numba": NUMBA_ENABLED}
results["solve_k2_n4000"] = timed(solve_big, repeat)
results["bound_k2_n4000"] = timed(lambda: stein.wasserstein_bound(sol_big, t2), repeat)
sol_mid = radial.solve_ground_state(2, 1000)
results["w1_k2_n1000"] = timed(
    lambda: wasser.w1_empirical_vs_cdf(sol_mid.points, t2), repeat
)
sol_small = radial.solve_ground_state(2, 200)
results["coupling_k2_n200"] = timed(
    lambda: coupling.coupling_wasserstein_bound(coupling.BiasTransform(sol_small)),
    repeat,
)
print(json.dumps(results))
"""


def run(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env["MIW_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run(
        [sys.executable, "-c", _WORKER],
        input=json.dumps(repeat),
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr)
    return json.loads(proc.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    compiled = run(disable_numba=False, repeat=args.repeat)
    fallback = run(disable_numba=True, repeat=args.repeat)
    print(f"{'workload':<22} {'numba [s]':>12} {'python [s]':>12} {'speedup':>9}")
    for key in ("solve_k2_n4000", "bound_k2_n4000", "w1_k2_n1000", "coupling_k2_n200"):
        c, f = compiled[key], fallback[key]
        print(f"{key:<22} {c:>12.4f} {f:>12.4f} {f / c:>8.1f}x")


if __name__ == "__main__":
    main()
