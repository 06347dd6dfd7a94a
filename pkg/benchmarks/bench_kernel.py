"""Time the compiled RK4 shooting kernel against its pure-Python twin.

    python benchmarks/bench_kernel.py [--steps N] [--repeat R]

Both backends integrate the same shot (Trig weight, p = 2 and p = 3) and
the script reports wall time per call, the speedup and the largest
difference in the final state.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fucik import _pykernel
from fucik.weights import Trig, scaled

try:
    from fucik import _kernel
except ImportError:  # extension not built
    _kernel = None


def _args(p: float, steps: int):
    m = scaled(Trig(2.0, 1.0, 1), 1.0 / 16)
    mk, meps, mda, mdb, mpar = m.descriptor()
    desc = (int(mk), float(meps), float(mda), float(mdb), np.ascontiguousarray(mpar, float))
    return (p, 20.0, 20.0, *desc, *desc, 0.0, 1.0, steps, 0.0, 1.0)


def _time(fn, args, repeat: int) -> tuple[float, tuple]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    print(f"{'p':>4} {'steps':>8} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'max |diff|':>11}")
    for p in (2.0, 3.0):
        args = _args(p, a.steps)
        t_py, r_py = _time(_pykernel.shoot, args, a.repeat)
        if _kernel is None:
            print(f"{p:4.1f} {a.steps:8d} {1e3 * t_py:12.2f} {'n/a':>12} {'n/a':>8} {'n/a':>11}")
            continue
        t_cy, r_cy = _time(_kernel.shoot, args, a.repeat)
        diff = max(abs(r_py[0] - r_cy[0]), abs(r_py[1] - r_cy[1]))
        print(f"{p:4.1f} {a.steps:8d} {1e3 * t_py:12.2f} {1e3 * t_cy:12.3f} "
              f"{t_py / t_cy:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
