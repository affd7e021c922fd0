"""Time-stepping kernels for the radial solver.

One leapfrog step of the coupled two-field system

    d_t^2 w = d_r^2 w + (2/r) d_r w - c^2 w + N(u, v, du, dv) + source

on a uniform radial grid.  The axis term uses the regular limit
3 d_r^2 w at r=0 (even ghost extension); the outer boundary node is left
untouched and is filled by the caller.

Quadratic couplings are encoded as term tables: N = sum_k coef[k] *
f[ia[k]] * f[ib[k]] where f indexes (1, u, v, u_t, u_r, v_t, v_r) and the
derivative factors are one-sided in time (u_t at the half step), which is
adequate for the small-amplitude couplings this solver targets.

Two implementations are provided: a numba-compiled loop and a pure-numpy
fallback.  EHF_NO_NUMBA=1 selects the numpy path; otherwise numba is used
when importable.  ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "HAVE_NUMBA", "step_numpy", "step_numba",
           "leapfrog_step", "F_ONE", "F_U", "F_V", "F_UT", "F_UR",
           "F_VT", "F_VR"]

F_ONE, F_U, F_V, F_UT, F_UR, F_VT, F_VR = range(7)

_DISABLED = os.environ.get("EHF_NO_NUMBA", "0") == "1"
try:
    if _DISABLED:
        raise ImportError("numba disabled via EHF_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _accel_numpy(w_curr, r, inv_dr2, inv_2dr, c2):
    acc = np.empty_like(w_curr)
    acc[1:-1] = (w_curr[2:] - 2.0 * w_curr[1:-1] + w_curr[:-2]) * inv_dr2 \
        + (w_curr[2:] - w_curr[:-2]) * inv_2dr * 2.0 / r[1:-1]
    acc[0] = 6.0 * (w_curr[1] - w_curr[0]) * inv_dr2
    acc[-1] = 0.0
    return acc - c2 * w_curr


def _coupling_numpy(coefs, ia, ib, factors):
    out = np.zeros(factors[1].shape[0])
    for k in range(len(coefs)):
        out += coefs[k] * factors[ia[k]] * factors[ib[k]]
    return out


def step_numpy(u_prev, u_curr, v_prev, v_curr, r, dt, dr, cu2, cv2,
               coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, src_u, src_v,
               u_next, v_next):
    """One leapfrog step, vectorized numpy implementation."""
    inv_dr2 = 1.0 / (dr * dr)
    inv_2dr = 1.0 / (2.0 * dr)
    acc_u = _accel_numpy(u_curr, r, inv_dr2, inv_2dr, cu2)
    acc_v = _accel_numpy(v_curr, r, inv_dr2, inv_2dr, cv2)

    if len(coef_u) or len(coef_v):
        ut = (u_curr - u_prev) / dt
        vt = (v_curr - v_prev) / dt
        ur = np.zeros_like(u_curr)
        vr = np.zeros_like(v_curr)
        ur[1:-1] = (u_curr[2:] - u_curr[:-2]) * inv_2dr
        vr[1:-1] = (v_curr[2:] - v_curr[:-2]) * inv_2dr
        ones = np.ones_like(u_curr)
        factors = (ones, u_curr, v_curr, ut, ur, vt, vr)
        if len(coef_u):
            acc_u += _coupling_numpy(coef_u, ia_u, ib_u, factors)
        if len(coef_v):
            acc_v += _coupling_numpy(coef_v, ia_v, ib_v, factors)

    if src_u is not None:
        acc_u += src_u
    if src_v is not None:
        acc_v += src_v

    dt2 = dt * dt
    np.copyto(u_next, 2.0 * u_curr - u_prev + dt2 * acc_u)
    np.copyto(v_next, 2.0 * v_curr - v_prev + dt2 * acc_v)


def _step_loop(u_prev, u_curr, v_prev, v_curr, r, dt, dr, cu2, cv2,
               coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, src_u, src_v,
               u_next, v_next):
    n = u_curr.shape[0]
    inv_dr2 = 1.0 / (dr * dr)
    inv_2dr = 1.0 / (2.0 * dr)
    dt2 = dt * dt
    nu = coef_u.shape[0]
    nv = coef_v.shape[0]
    for i in range(n - 1):
        if i == 0:
            lap_u = 6.0 * (u_curr[1] - u_curr[0]) * inv_dr2
            lap_v = 6.0 * (v_curr[1] - v_curr[0]) * inv_dr2
            ur_i = 0.0
            vr_i = 0.0
        else:
            lap_u = (u_curr[i + 1] - 2.0 * u_curr[i] + u_curr[i - 1]) \
                * inv_dr2 \
                + (u_curr[i + 1] - u_curr[i - 1]) * inv_2dr * 2.0 / r[i]
            lap_v = (v_curr[i + 1] - 2.0 * v_curr[i] + v_curr[i - 1]) \
                * inv_dr2 \
                + (v_curr[i + 1] - v_curr[i - 1]) * inv_2dr * 2.0 / r[i]
            ur_i = (u_curr[i + 1] - u_curr[i - 1]) * inv_2dr
            vr_i = (v_curr[i + 1] - v_curr[i - 1]) * inv_2dr
        acc_u = lap_u - cu2 * u_curr[i]
        acc_v = lap_v - cv2 * v_curr[i]
        if nu or nv:
            ut_i = (u_curr[i] - u_prev[i]) / dt
            vt_i = (v_curr[i] - v_prev[i]) / dt
            for k in range(nu):
                fa = _factor(ia_u[k], u_curr[i], v_curr[i], ut_i, ur_i,
                             vt_i, vr_i)
                fb = _factor(ib_u[k], u_curr[i], v_curr[i], ut_i, ur_i,
                             vt_i, vr_i)
                acc_u += coef_u[k] * fa * fb
            for k in range(nv):
                fa = _factor(ia_v[k], u_curr[i], v_curr[i], ut_i, ur_i,
                             vt_i, vr_i)
                fb = _factor(ib_v[k], u_curr[i], v_curr[i], ut_i, ur_i,
                             vt_i, vr_i)
                acc_v += coef_v[k] * fa * fb
        acc_u += src_u[i]
        acc_v += src_v[i]
        u_next[i] = 2.0 * u_curr[i] - u_prev[i] + dt2 * acc_u
        v_next[i] = 2.0 * v_curr[i] - v_prev[i] + dt2 * acc_v


def _factor_py(code, u, v, ut, ur, vt, vr):
    if code == 0:
        return 1.0
    if code == 1:
        return u
    if code == 2:
        return v
    if code == 3:
        return ut
    if code == 4:
        return ur
    if code == 5:
        return vt
    return vr


if HAVE_NUMBA:
    _factor = njit(cache=True, inline="always")(_factor_py)
    step_numba = njit(cache=True)(_step_loop)
else:
    _factor = _factor_py
    step_numba = None

_ZEROS_CACHE: dict[int, np.ndarray] = {}


def _zeros(n: int) -> np.ndarray:
    z = _ZEROS_CACHE.get(n)
    if z is None:
        z = np.zeros(n)
        _ZEROS_CACHE[n] = z
    return z


def leapfrog_step(u_prev, u_curr, v_prev, v_curr, r, dt, dr, cu2, cv2,
                  coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, src_u, src_v,
                  u_next, v_next):
    """Dispatch one step to the active backend (see BACKEND)."""
    if HAVE_NUMBA:
        n = u_curr.shape[0]
        su = src_u if src_u is not None else _zeros(n)
        sv = src_v if src_v is not None else _zeros(n)
        step_numba(u_prev, u_curr, v_prev, v_curr, r, dt, dr, cu2, cv2,
                   coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, su, sv,
                   u_next, v_next)
        u_next[-1] = 0.0
        v_next[-1] = 0.0
    else:
        step_numpy(u_prev, u_curr, v_prev, v_curr, r, dt, dr, cu2, cv2,
                   coef_u, ia_u, ib_u, coef_v, ia_v, ib_v, src_u, src_v,
                   u_next, v_next)
        u_next[-1] = 0.0
        v_next[-1] = 0.0


def step_with_backend(backend: str):
    """Explicit backend accessor for benchmarks and equivalence tests."""
    if backend == "numpy":
        def run(*args):
            step_numpy(*args)
            args[-2][-1] = 0.0
            args[-1][-1] = 0.0
        return run
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")

        def run(*args):
            a = list(args)
            n = a[1].shape[0]
            if a[15] is None:
                a[15] = _zeros(n)
            if a[16] is None:
                a[16] = _zeros(n)
            step_numba(*a)
            args[-2][-1] = 0.0
            args[-1][-1] = 0.0
        return run
    raise ValueError(f"unknown backend {backend!r}")
