#!/usr/bin/env python3
"""Benchmark the streaming kernels: numba path vs pure-Python fallback.

Re-executes itself in a child process per path so the WAVESTREAM_NUMBA env
flag is honored at import time (that is how the fallback is selected in
production too).  Compile time is excluded by a warmup call.
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = [
    # (label, mode, number, levels, T)
    ("ndwt number=4 L=8 T=20000", "ndwt", 4, 8, 20000),
    ("ndwt number=1 L=5 T=20000", "ndwt", 1, 5, 20000),
    ("nwpt number=4 L=5 T=2000", "nwpt", 4, 5, 2000),
    ("nwpt number=2 L=6 T=2000", "nwpt", 2, 6, 2000),
]


def run_worker(repeats: int) -> None:
    import numpy as np

    from wavestream._accel import USING_NUMBA
    from wavestream.filters import daubechies_filter
    from wavestream.transform import TransformConfig, TransformState

    rng = np.random.default_rng(0)
    results = {"numba": USING_NUMBA, "cases": []}
    for label, mode, number, levels, T in CASES:
        config = TransformConfig(levels=levels, filter=daubechies_filter(number),
                                 mode=mode)
        y = rng.standard_normal(T)
        TransformState(config).push_block(y[:4])  # warmup / compile
        best = float("inf")
        for _ in range(repeats):
            state = TransformState(config)
            t0 = time.perf_counter()
            state.push_block(y)
            best = min(best, time.perf_counter() - t0)
        results["cases"].append({"label": label, "seconds": best,
                                 "samples_per_sec": T / best})
    print(json.dumps(results))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if args.worker:
        run_worker(args.repeats)
        return 0

    timings = {}
    for flag in ("1", "0"):
        env = dict(os.environ, WAVESTREAM_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--worker",
                              "--repeats", str(args.repeats)],
                             capture_output=True, text=True, env=env)
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            return 1
        timings[flag] = json.loads(out.stdout)

    if not timings["1"]["numba"]:
        print("note: numba unavailable; both rows use the Python fallback")
    width = max(len(c["label"]) for c in timings["1"]["cases"])
    print(f"{'case'.ljust(width)}  {'numba':>12}  {'fallback':>12}  {'speedup':>8}")
    for jit_case, py_case in zip(timings["1"]["cases"], timings["0"]["cases"]):
        ratio = py_case["seconds"] / jit_case["seconds"]
        print(f"{jit_case['label'].ljust(width)}  "
              f"{jit_case['seconds'] * 1e3:>10.2f}ms  "
              f"{py_case['seconds'] * 1e3:>10.2f}ms  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
