"""Compiled vs numpy kernels.

    python benchmarks/bench_kernels.py [--sizes 200 800 3200] [--repeat 5]

Times the WENO3 right-hand side, the banded Jacobian, the transposed banded
product and a full forward+adjoint solve under both backends.  The solve
comparison runs in a subprocess with ``WENOADJ_BACKEND=python`` so that
the whole stack (including the fused integrator) switches over.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from wenoadj import _backend, _pykernels

SOLVE = """
import time, numpy as np
from wenoadj import oracle
from wenoadj.adjoint import adjoint_sweep, terminal_data
from wenoadj.mesh import Grid1D, sample
from wenoadj.timestepping import Discretization, TimeGrid, integrate
g = Grid1D(-1.5, 1.5, {n})
d = Discretization(g, TimeGrid.from_ratio(0.5, g.dx, 0.5), "weno3-ssprk3")
u0 = sample(oracle.smooth_bump, g)
best = float("inf")
for _ in range({repeat}):
    t = time.perf_counter()
    tr = integrate(u0, d)
    adjoint_sweep(tr, terminal_data(tr.final, np.zeros({n})))
    best = min(best, time.perf_counter() - t)
print(best)
"""


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(n, repeat):
    rng = np.random.default_rng(0)
    y = rng.uniform(-1, 1, n)
    bands = rng.standard_normal((5, n))
    c = _backend.get("cython")
    number = max(1, 20000 // n)
    cases = {
        "weno3 rhs": lambda k: k.burgers_weno3_rhs(y, 1.0, 1e-6, 0.01),
        "weno3 jacobian": lambda k: k.burgers_weno3_jacobian(y, 1.0, 1e-6, 0.01),
        "banded J^T p": lambda k: k.banded_rmatvec(bands, y),
    }
    for name, call in cases.items():
        tp = best_of(lambda: call(_pykernels), repeat, number)
        tc = best_of(lambda: call(c), repeat, number)
        yield name, n, tp, tc


def solve_row(n, repeat):
    out = {}
    for backend in ("python", "cython"):
        env = dict(os.environ, WENOADJ_BACKEND=backend)
        res = subprocess.run([sys.executable, "-c", SOLVE.format(n=n, repeat=repeat)],
                             env=env, capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout.strip())
    return "forward+adjoint", n, out["python"], out["cython"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 800, 3200])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _backend.has_compiled():
        sys.exit("compiled kernels are not built; run `pip install -e .` first")
    print(f"{'kernel':<16s} {'N':>6s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for n in args.sizes:
        rows = list(kernel_rows(n, args.repeat)) + [solve_row(n, max(1, args.repeat // 2))]
        for name, size, tp, tc in rows:
            print(f"{name:<16s} {size:6d} {tp:12.3e} {tc:12.3e} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
