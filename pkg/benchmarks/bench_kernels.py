#!/usr/bin/env python3
"""Benchmark the leapfrog stepping kernel: numba versus pure numpy.

Runs the same batch of steps through both backends on identical state and
reports per-step timings plus the max deviation between the results.

    python benchmarks/bench_kernels.py [n_nodes] [n_steps]
"""

import sys
import time

import numpy as np

from ehfol import kernels
from ehfol.evolution import parse_coupling


def run_backend(backend, n, steps):
    step = kernels.step_with_backend(backend)
    r = np.linspace(0.0, 70.0, n)
    dr = r[1] - r[0]
    dt = 0.5 * dr
    u_prev = np.exp(-((r - 1.0) / 0.35) ** 2) + np.exp(-((r + 1.0) / 0.35) ** 2)
    u_curr = u_prev.copy()
    v_prev = np.exp(-r * r)
    v_curr = v_prev.copy()
    coef_u, ia_u, ib_u = parse_coupling("0.01*vt*vt")
    coef_v, ia_v, ib_v = parse_coupling("0.01*u*v")
    u_next = np.empty_like(r)
    v_next = np.empty_like(r)

    # warm-up (JIT compilation for the numba path)
    step(u_prev, u_curr, v_prev, v_curr, r, dt, dr, 0.0, 1.0,
         coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, None, None,
         u_next, v_next)

    t0 = time.perf_counter()
    for _ in range(steps):
        step(u_prev, u_curr, v_prev, v_curr, r, dt, dr, 0.0, 1.0,
             coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, None, None,
             u_next, v_next)
        u_next[-1] = u_curr[-1]
        v_next[-1] = v_curr[-1]
        u_prev, u_curr, u_next = u_curr, u_next, u_prev
        v_prev, v_curr, v_next = v_curr, v_next, v_prev
    elapsed = time.perf_counter() - t0
    return elapsed, u_curr.copy(), v_curr.copy()


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 4201
    steps = int(sys.argv[2]) if len(sys.argv) > 2 else 2000

    t_np, u_np, v_np = run_backend("numpy", n, steps)
    print(f"numpy : {t_np:.3f} s total, {t_np / steps * 1e6:8.2f} us/step")

    if kernels.HAVE_NUMBA:
        t_nb, u_nb, v_nb = run_backend("numba", n, steps)
        print(f"numba : {t_nb:.3f} s total, {t_nb / steps * 1e6:8.2f} us/step")
        print(f"speedup: {t_np / t_nb:.2f}x")
        dev = max(np.max(np.abs(u_np - u_nb)), np.max(np.abs(v_np - v_nb)))
        print(f"max |numpy - numba| after {steps} steps: {dev:.3e}")
    else:
        print("numba : unavailable (EHF_NO_NUMBA set or numba missing)")


if __name__ == "__main__":
    main()
