"""Time the compiled and pure-Python kernels on simulation-sized inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--rounds R]

Reports the best-of-N time per call for each backend, checks that both
return identical arrays, and times a short end-to-end fuzzy run with each.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from fuzzywsn import rulebases
from fuzzywsn._kernels import backends


def kernel_inputs(seed=0):
    rng = np.random.default_rng(seed)
    points = rng.uniform(0, 100, size=(100, 2))
    centers = points[rng.choice(100, size=5, replace=False)].copy()
    rb = rulebases.election_base()
    a = rb.arrays()
    inputs = np.column_stack([rng.uniform(0, 40, 100), rng.uniform(0, 1.5, 100), rng.uniform(0, 140, 100)])
    return points, centers, (inputs, a["lo"], a["hi"], a["mf"], a["rules"], a["centroids"])


def bench(repeat):
    points, centers, infer_args = kernel_inputs()
    results = {}
    for name, mod in backends().items():
        t_lloyd = min(timeit.repeat(lambda: mod.lloyd(points, centers.copy(), 100), number=20, repeat=repeat)) / 20
        t_infer = min(timeit.repeat(lambda: mod.infer_batch(*infer_args), number=20, repeat=repeat)) / 20
        results[name] = (t_lloyd, t_infer, mod.lloyd(points, centers.copy(), 100), mod.infer_batch(*infer_args))
    return results


def end_to_end(rounds):
    code = (
        "import time; from fuzzywsn.sim import SimConfig, simulate;"
        f"t=time.perf_counter(); simulate(SimConfig(rounds={rounds})); print(time.perf_counter()-t)"
    )
    times = {}
    for name, env in (("cython", {}), ("python", {"FUZZYWSN_PURE_PYTHON": "1"})):
        if name not in backends():
            continue
        out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env},
                             capture_output=True, text=True, check=True)
        times[name] = float(out.stdout.strip())
    return times


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rounds", type=int, default=200)
    args = ap.parse_args(argv)

    results = bench(args.repeat)
    print(f"{'backend':8s} {'lloyd (us)':>12s} {'infer_batch (us)':>18s}")
    for name, (tl, ti, _, _) in results.items():
        print(f"{name:8s} {tl * 1e6:12.1f} {ti * 1e6:18.1f}")
    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        same = (np.array_equal(py[2][0], cy[2][0]) and np.array_equal(py[2][1], cy[2][1])
                and np.array_equal(py[3], cy[3], equal_nan=True))
        print(f"identical outputs: {same}")
        print(f"speedup lloyd x{py[0] / cy[0]:.1f}, infer_batch x{py[1] / cy[1]:.1f}")

    times = end_to_end(args.rounds)
    for name, t in times.items():
        print(f"fuzzy run, {args.rounds} rounds, {name}: {t:.2f} s")


if __name__ == "__main__":
    main()
