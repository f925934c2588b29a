"""Benchmark the compiled series kernel against the numpy fallback.

Times the raw product kernel at several truncations, then an end-to-end
evolution run per backend (spawned with the backend forced through the
environment, mirroring the import-time selection).

Run:  python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import timeit

import numpy as np

from layerwaves import _kernels_py

try:
    from layerwaves import _kernels_cy
except ImportError:
    _kernels_cy = None

_EVOLVE_SNIPPET = """
import time
import numpy as np
from layerwaves import kernels, pencil, dynamics, spectral

cfg = pencil.classify_config([-1.0, 1.0, -1.0, 1.0])
rng = np.random.default_rng(0)
state = dynamics.PhaseState([
    spectral.TrigSeries(1, 0.02 * rng.standard_normal(64),
                        0.02 * rng.standard_normal(64))
    for _ in range(4)])
dt = 0.5 * dynamics.cfl_limit(cfg, state)
t0 = time.perf_counter()
dynamics.evolve(cfg, state, dt, 400, store_every=400)
print(f"{kernels.backend()} {time.perf_counter() - t0:.3f}")
"""


def bench_product(impl, n, repeats=200):
    rng = np.random.default_rng(42)
    fc, fs = rng.standard_normal(n), rng.standard_normal(n)
    gc, gs = rng.standard_normal(n), rng.standard_normal(n)
    call = lambda: impl.trig_product(fc, fs, 0.1, gc, gs, -0.2, 2 * n)
    call()  # warm up
    return min(timeit.repeat(call, number=repeats, repeat=3)) / repeats


def main():
    impls = [("python", _kernels_py)]
    if _kernels_cy is not None:
        impls.append(("cython", _kernels_cy))
    else:
        print("compiled kernels not built; showing the fallback only\n")

    print("series product kernel (seconds per call)")
    header = "    n    " + "".join(f"{name:>12}" for name, _ in impls)
    print(header + ("       speedup" if len(impls) == 2 else ""))
    for n in (16, 32, 64, 128, 256):
        times = [bench_product(impl, n) for _, impl in impls]
        row = f"  {n:5d}  " + "".join(f"{t * 1e6:10.1f}us" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:10.1f}x"
        print(row)

    print("\nend-to-end: 400 RK4 steps, 64 harmonics, 4 components")
    for name, _ in impls:
        env = dict(os.environ)
        env["LAYERWAVES_PURE_PYTHON"] = "1" if name == "python" else "0"
        out = subprocess.run([sys.executable, "-c", _EVOLVE_SNIPPET],
                             capture_output=True, text=True, env=env)
        print("  " + out.stdout.strip() + " s")


if __name__ == "__main__":
    main()
