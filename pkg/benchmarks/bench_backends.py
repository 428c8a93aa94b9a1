"""Timing comparison of the numba and pure-Python simulator backends.

Runs the same boundary-decay workload twice in subprocesses, once with
REGLAP_NUMBA=1 and once with REGLAP_NUMBA=0, and reports wall time plus a
checksum of the classification counts so the streams can be seen to agree.

Usage: python benchmarks/bench_backends.py [--paths 20000]
"""

import argparse
import os
import subprocess
import sys

_WORKLOAD = r"""
import time
import numpy as np
from reglap.geometry import HalfSpace
from reglap.simulator import JumpChainConfig, HBox, run_many
from reglap._backend import USE_NUMBA

cfg = JumpChainConfig(alpha=1.5, kernel="constant", dom=HalfSpace(2),
                      mode="censored", boundary_absorb_delta=1e-3,
                      rng_seed=11)
run = HBox(0.0, 1.0, 1.0)
event = HBox(1.0, 4.0, 4.0)
start = np.array([0.0, 0.1])
# warm-up compiles the kernels so the timed run is steady state
run_many(start, cfg, run, event, 200)
t0 = time.perf_counter()
res = run_many(start, cfg, run, event, {paths})
dt = time.perf_counter() - t0
counts = np.bincount(res.classifications, minlength=4)
print(f"backend={{'numba' if USE_NUMBA else 'numpy'}} "
      f"paths={paths} wall={{dt:.3f}}s "
      f"paths_per_s={{{paths}/dt:.0f}} "
      f"counts={{counts.tolist()}}")
"""


def run_backend(flag, paths):
    env = dict(os.environ, REGLAP_NUMBA=flag)
    code = _WORKLOAD.format(paths=paths)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(out.returncode)
    return out.stdout.strip()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=20000)
    args = ap.parse_args()
    line_fast = run_backend("1", args.paths)
    line_slow = run_backend("0", args.paths)
    print(line_fast)
    print(line_slow)
    same = line_fast.split("counts=")[1] == line_slow.split("counts=")[1]
    print(f"classification counts identical: {same}")


if __name__ == "__main__":
    main()
