"""Compare the numba and pure-numpy kernel backends.

Each backend runs in its own interpreter because the selection flag is read
at import time.  Usage:

    python3 benchmarks/bench_backends.py [--trials 500] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
import igmahp
from igmahp import kernels, random_prm, JudgmentScale, pigm, optimize_wls, OptimizerConfig
from igmahp.simulation import VerificationConfig, run

trials, repeat = int(sys.argv[1]), int(sys.argv[2])
prms = [random_prm(15, JudgmentScale.saaty(9), s).entries for s in range(200)]
w = np.full(15, 1 / 15)

def best(fn):
    fn()  # warm-up: JIT compile or cache load
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

def grams():
    for a in prms:
        kernels.full_gram(a)

def objective():
    for a in prms:
        for _ in range(50):
            kernels.wls_objective(a, w)

def lu():
    for a in prms:
        kernels.lu_factor(kernels.full_gram(a), 1e-12)

def power():
    for a in prms:
        kernels.power_iteration(a, 1e-10, 10000)

def methods():
    for a in prms:
        pigm(a)

def optimizer():
    for a in prms[:5]:
        optimize_wls(a, OptimizerConfig(seed=1))

def sim1():
    run(VerificationConfig(trials, master_seed=1))

out = {"backend": igmahp.BACKEND}
for name, fn in [("full_gram x200", grams), ("wls_objective x10000", objective),
                 ("lu_factor x200", lu), ("power_iteration x200", power),
                 ("pigm x200", methods), ("nelder-mead x5 (n=15)", optimizer),
                 (f"simulation 1 x{trials}", sim1)]:
    out[name] = best(fn)
print(json.dumps(out))
"""


def measure(disable: bool, trials: int, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("IGMAHP_DISABLE_NUMBA", None)
    if disable:
        env["IGMAHP_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKLOAD, str(trials), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    jit = measure(False, args.trials, args.repeat)
    plain = measure(True, args.trials, args.repeat)
    print(f"{'workload':<28}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key in jit:
        if key == "backend":
            continue
        print(f"{key:<28}{jit[key]:>11.4f}s{plain[key]:>11.4f}s{plain[key] / jit[key]:>9.1f}x")


if __name__ == "__main__":
    main()
