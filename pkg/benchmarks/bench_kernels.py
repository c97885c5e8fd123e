"""Compare the numba and numpy derivative kernels, and a full RHS per backend.

    python3 benchmarks/bench_kernels.py [--sizes 41,151,401] [--repeat 5]

The kernel table calls both implementations directly in this process. The RHS
table runs one subprocess per backend, since ``RSWE_SBP_BACKEND`` is read at
import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from rswe_sbp import sbp
from rswe_sbp._accel import BACKEND_ENV, HAVE_NUMBA

RHS_SNIPPET = """
import sys, timeit, numpy as np
from rswe_sbp._accel import backend_name
from rswe_sbp.boundary import BoundarySpec
from rswe_sbp.grid import build_grid, make_mesh
from rswe_sbp.nonlinear import NonlinearRSWE
from rswe_sbp.state import PhysParams
n, repeat = int(sys.argv[1]), int(sys.argv[2])
p = PhysParams()
g = build_grid(make_mesh("seashell"), n)
m = NonlinearRSWE(g, p, BoundarySpec())
q = np.stack([np.full(g.shape, p.H), np.full(g.shape, p.U), np.full(g.shape, p.V)])
q[0] += 0.01 * np.sin(g.x / 7.0)
m.rhs(q, 0.0)
best = min(timeit.repeat(lambda: m.rhs(q, 0.0), number=10, repeat=repeat)) / 10
print(backend_name(), best)
"""


def best_time(fn, repeat, number):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(sizes, repeat):
    print(f"{'n':>6} {'axis':>4} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for n in sizes:
        op = sbp.build_sbp_d1(n)
        f = np.random.default_rng(n).standard_normal((n, n))
        for axis, (fnp, fnb) in enumerate(
            [(sbp._apply_axis0_numpy, sbp._apply_axis0_numba), (sbp._apply_axis1_numpy, sbp._apply_axis1_numba)]
        ):
            np.testing.assert_allclose(fnp(op.block, op.stencil, f), fnb(op.block, op.stencil, f), rtol=1e-12,
                                       atol=1e-12 * n)
            number = max(1, 200_000 // (n * n))
            t_np = best_time(lambda: fnp(op.block, op.stencil, f), repeat, number)
            t_nb = best_time(lambda: fnb(op.block, op.stencil, f), repeat, number)
            print(f"{n:>6} {axis:>4} {1e3 * t_np:>11.4f} {1e3 * t_nb:>11.4f} {t_np / t_nb:>8.2f}")


def bench_rhs(sizes, repeat):
    print("\nnonlinear RHS on the seashell mesh")
    print(f"{'n':>6} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for n in sizes:
        times = {}
        for backend in ("numpy", "numba"):
            env = dict(os.environ, **{BACKEND_ENV: backend})
            out = subprocess.run([sys.executable, "-c", RHS_SNIPPET, str(n), str(repeat)], env=env, check=True,
                                 capture_output=True, text=True).stdout.split()
            times[out[0]] = float(out[1])
        print(f"{n:>6} {1e3 * times['numpy']:>11.3f} {1e3 * times['numba']:>11.3f} "
              f"{times['numpy'] / times['numba']:>8.2f}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="41,151,401")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.repeat)
    bench_rhs(sizes, args.repeat)


if __name__ == "__main__":
    main()
