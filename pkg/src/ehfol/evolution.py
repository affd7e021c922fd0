"""Radially symmetric method-of-lines evolution of wave/Klein-Gordon pairs.

The system evolved from t = 1 is

    d_t^2 u = d_r^2 u + (2/r) d_r u - mass_u^2 u + N_u + S_u
    d_t^2 v = d_r^2 v + (2/r) d_r v - mass_v^2 v + N_v + S_v

with second-order centered space discretization, leapfrog time stepping at
a configured CFL number, the regularized 3 d_r^2 axis limit, and an
absorbing (or reflecting, or exact-Dirichlet) outer boundary.  Couplings
N are quadratic expressions over {u, v, ut, ur, vt, vr} parsed from a
small grammar, e.g. ``"vt*vt"`` or ``"0.5*u*v - ur"``.

Solutions are interpolated onto foliation leaves, per-region sup norms are
extracted, and decay exponents fitted by log-log least squares.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RectBivariateSpline

from . import kernels
from .energy import FieldOnSlice
from .foliation import (Region, SliceSample, TimeFunctionTable,
                        build_time_function, exterior_boundary, slice_points)

__all__ = ["EvolutionConfig", "SpacetimeGrid", "DecayFit", "BlowUpError",
           "parse_coupling", "evolve_radial", "sample_on_slices",
           "decay_series", "fit_decay", "manufactured_convergence",
           "initial_profile", "CFL_LIMIT"]

# Leapfrog stability bound for the regularized axis stencil (Gershgorin:
# |lambda| <= 12/dr^2, so dt <= dr/sqrt(3)).
CFL_LIMIT = 0.577

_FACTORS = {"u": kernels.F_U, "v": kernels.F_V, "ut": kernels.F_UT,
            "ur": kernels.F_UR, "vt": kernels.F_VT, "vr": kernels.F_VR}

_BLOWUP_THRESHOLD = 1e10


class BlowUpError(RuntimeError):
    """Raised when the evolution leaves the finite range."""

    def __init__(self, t_last: float, field_name: str):
        super().__init__(f"solution blew up after t={t_last:.6g} "
                         f"(field {field_name})")
        self.t_last = t_last
        self.field_name = field_name


def parse_coupling(expr: str):
    """Parse 'c*f1*f2 + ...' into (coef, ia, ib) term tables.

    Factors are drawn from u, v, ut, ur, vt, vr; at most two per term
    (quadratic nonlinearities).  An empty string means no coupling.
    """
    expr = expr.strip()
    if not expr:
        return (np.zeros(0), np.zeros(0, np.int64), np.zeros(0, np.int64))
    # split into signed terms
    pieces = re.findall(r"[+-]?[^+-]+", expr.replace(" ", ""))
    coefs, ia, ib = [], [], []
    for piece in pieces:
        sign = -1.0 if piece.startswith("-") else 1.0
        body = piece.lstrip("+-")
        if not body:
            raise ValueError(f"empty term in coupling {expr!r}")
        factors = body.split("*")
        coef = sign
        codes = []
        for fac in factors:
            if fac in _FACTORS:
                codes.append(_FACTORS[fac])
            else:
                try:
                    coef *= float(fac)
                except ValueError:
                    raise ValueError(
                        f"unknown factor {fac!r} in coupling {expr!r}")
        if len(codes) > 2:
            raise ValueError(
                f"coupling term {piece!r} exceeds quadratic degree")
        while len(codes) < 2:
            codes.append(kernels.F_ONE)
        coefs.append(coef)
        ia.append(codes[0])
        ib.append(codes[1])
    return (np.asarray(coefs, dtype=float),
            np.asarray(ia, dtype=np.int64),
            np.asarray(ib, dtype=np.int64))


def initial_profile(profile: str, amplitude: float, width: float,
                    center: float):
    """Initial-data profile by id, smooth (even) at the axis.

    'gaussian': A exp(-(r/w)^2); 'shell': even pair of Gaussians at
    +-center (a pulse straddling the light cone when center ~ 1);
    'none': zero.
    """
    if profile == "none" or amplitude == 0.0:
        return lambda r: np.zeros_like(r)
    if profile == "gaussian":
        return lambda r: amplitude * np.exp(-((r / width) ** 2))
    if profile == "shell":
        return lambda r: amplitude * (np.exp(-(((r - center) / width) ** 2))
                                      + np.exp(-(((r + center) / width) ** 2)))
    raise ValueError(f"unknown profile {profile!r}")


@dataclass
class EvolutionConfig:
    r_max: float
    n_r: int
    t_end: float
    cfl: float = 0.5
    mass_u: float = 0.0
    mass_v: float = 1.0
    coupling_u: str = ""
    coupling_v: str = ""
    epsilon: float = 1.0
    profile_u: str = "gaussian"
    width_u: float = 1.0
    center_u: float = 0.0
    profile_v: str = "none"
    width_v: float = 1.0
    center_v: float = 0.0
    boundary: str = "sommerfeld"  # sommerfeld | reflect | exact
    store_stride: int = 0  # 0: pick automatically (~600 stored levels)

    def validate(self):
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        if self.n_r < 16:
            raise ValueError("n_r must be at least 16")
        if self.t_end <= 1.0:
            raise ValueError("t_end must exceed the initial time t=1")
        if not 0.0 < self.cfl <= CFL_LIMIT:
            raise ValueError(
                f"cfl must lie in (0, {CFL_LIMIT}] for leapfrog stability, "
                f"got {self.cfl}")
        if self.mass_u < 0 or self.mass_v < 0:
            raise ValueError("masses must be nonnegative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.boundary not in ("sommerfeld", "reflect", "exact"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        parse_coupling(self.coupling_u)
        parse_coupling(self.coupling_v)
        return self


@dataclass
class SpacetimeGrid:
    """Stored time levels of the evolved pair on the radial grid."""

    r: np.ndarray
    t_stored: np.ndarray
    u: np.ndarray   # (levels, nodes)
    ut: np.ndarray
    v: np.ndarray
    vt: np.ndarray
    dt: float
    dr: float
    config: EvolutionConfig
    _splines: dict = field(default_factory=dict, repr=False)

    @property
    def t_end(self) -> float:
        return float(self.t_stored[-1])

    def spline(self, name: str) -> RectBivariateSpline:
        if name not in self._splines:
            data = getattr(self, name)
            kx = min(3, len(self.t_stored) - 1)
            self._splines[name] = RectBivariateSpline(
                self.t_stored, self.r, data, kx=kx, ky=3)
        return self._splines[name]


def _check_finite(arr: np.ndarray, t: float, name: str):
    if not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) > _BLOWUP_THRESHOLD:
        raise BlowUpError(t, name)


def evolve_radial(config: EvolutionConfig, *, source_u=None, source_v=None,
                  initial=None, boundary_values=None,
                  _lagged_boundary: bool = False) -> SpacetimeGrid:
    """Run the evolution and return the stored grid.

    ``source_u``/``source_v`` are optional callables (t, r_array) -> array
    (used by manufactured-solution runs).  ``initial`` optionally overrides
    the configured data with callables (u0, ut0, v0, vt0).
    ``boundary_values`` supplies (t -> (u, v)) for the 'exact' boundary;
    ``_lagged_boundary`` is the first-order negative control for
    convergence self-tests.
    """
    config.validate()
    n = config.n_r + 1
    r = np.linspace(0.0, config.r_max, n)
    dr = r[1] - r[0]
    dt = config.cfl * dr
    nsteps = int(np.ceil((config.t_end - 1.0) / dt))
    dt = (config.t_end - 1.0) / nsteps
    lam = dt / dr

    stride = config.store_stride
    if stride <= 0:
        stride = max(1, nsteps // 600)
    if nsteps // stride < 4:
        stride = max(1, nsteps // 4)  # splines need >= 4 levels

    if initial is not None:
        u0f, ut0f, v0f, vt0f = initial
        u = np.asarray(u0f(r), dtype=float).copy()
        ut0 = np.asarray(ut0f(r), dtype=float)
        v = np.asarray(v0f(r), dtype=float).copy()
        vt0 = np.asarray(vt0f(r), dtype=float)
    else:
        u = initial_profile(config.profile_u, config.epsilon,
                            config.width_u, config.center_u)(r)
        v = initial_profile(config.profile_v, config.epsilon,
                            config.width_v, config.center_v)(r)
        ut0 = np.zeros_like(r)
        vt0 = np.zeros_like(r)

    coef_u, ia_u, ib_u = parse_coupling(config.coupling_u)
    coef_v, ia_v, ib_v = parse_coupling(config.coupling_v)
    cu2 = config.mass_u ** 2
    cv2 = config.mass_v ** 2

    def sources(t):
        su = None if source_u is None else np.asarray(source_u(t, r), float)
        sv = None if source_v is None else np.asarray(source_v(t, r), float)
        return su, sv

    def fill_boundary(w_next, w_curr, w_name, t_next):
        if config.boundary == "reflect":
            w_next[-1] = 0.0
        elif config.boundary == "sommerfeld":
            # first-order upwind for the outgoing invariant r*w
            wb = r[-1] * w_curr[-1] - lam * (r[-1] * w_curr[-1]
                                             - r[-2] * w_curr[-2])
            w_next[-1] = wb / r[-1]
        else:  # exact Dirichlet from supplied boundary values
            tb = t_next - dt if _lagged_boundary else t_next
            ub, vb = boundary_values(tb)
            w_next[-1] = ub if w_name == "u" else vb

    if config.boundary == "exact" and boundary_values is None:
        raise ValueError("boundary='exact' requires boundary_values")

    # Taylor start: second-order accurate first step.  Feeding the kernel
    # u_prev = u - dt*ut0 makes its backward-difference velocity factor
    # equal the initial velocity; the acceleration is then recovered from
    # the leapfrog identity.
    su, sv = sources(1.0)
    u_acc = np.zeros_like(r)
    v_acc = np.zeros_like(r)
    kernels.leapfrog_step(u - dt * ut0, u, v - dt * vt0, v, r, dt, dr,
                          cu2, cv2, coef_u, ia_u, ib_u, coef_v, ia_v, ib_v,
                          su, sv, u_acc, v_acc)
    acc_u = (u_acc - u - dt * ut0) / (dt * dt)
    acc_v = (v_acc - v - dt * vt0) / (dt * dt)
    u_next = u + dt * ut0 + 0.5 * dt * dt * acc_u
    v_next = v + dt * vt0 + 0.5 * dt * dt * acc_v
    fill_boundary(u_next, u, "u", 1.0 + dt)
    fill_boundary(v_next, v, "v", 1.0 + dt)

    u_prev, u_curr = u, u_next
    v_prev, v_curr = v, v_next

    stored_t = [1.0]
    stored = {"u": [u.copy()], "ut": [ut0.copy()],
              "v": [v.copy()], "vt": [vt0.copy()]}

    u_new = np.empty_like(r)
    v_new = np.empty_like(r)
    t = 1.0 + dt
    for step in range(1, nsteps):
        su, sv = sources(t)
        kernels.leapfrog_step(u_prev, u_curr, v_prev, v_curr, r, dt, dr,
                              cu2, cv2, coef_u, ia_u, ib_u,
                              coef_v, ia_v, ib_v, su, sv, u_new, v_new)
        t_next = 1.0 + (step + 1) * dt
        fill_boundary(u_new, u_curr, "u", t_next)
        fill_boundary(v_new, v_curr, "v", t_next)
        if step % stride == 0:
            _check_finite(u_curr, t, "u")
            _check_finite(v_curr, t, "v")
            stored_t.append(t)
            stored["u"].append(u_curr.copy())
            stored["ut"].append((u_new - u_prev) / (2.0 * dt))
            stored["v"].append(v_curr.copy())
            stored["vt"].append((v_new - v_prev) / (2.0 * dt))
        u_prev, u_curr, u_new = u_curr, u_new, u_prev
        v_prev, v_curr, v_new = v_curr, v_new, v_prev
        t = t_next

    _check_finite(u_curr, t, "u")
    _check_finite(v_curr, t, "v")
    stored_t.append(t)
    stored["u"].append(u_curr.copy())
    stored["ut"].append((u_curr - u_prev) / dt)  # one-sided at the end
    stored["v"].append(v_curr.copy())
    stored["vt"].append((v_curr - v_prev) / dt)

    return SpacetimeGrid(r=r, t_stored=np.asarray(stored_t),
                         u=np.asarray(stored["u"]),
                         ut=np.asarray(stored["ut"]),
                         v=np.asarray(stored["v"]),
                         vt=np.asarray(stored["vt"]),
                         dt=dt, dr=dr, config=config)


# ---------------------------------------------------------------------------
# Slice sampling and decay fits
# ---------------------------------------------------------------------------

def _safe_slice_radius(grid: SpacetimeGrid, table: TimeFunctionTable,
                       margin: float = 0.5) -> float:
    """Largest radius whose slice point is inside the untainted rectangle.

    A node (T(s,r), r) is accepted when T <= t_end and the boundary's
    domain of influence r > r_max - (t - 1) has not reached it.
    """
    r = table.r_nodes
    T = table.T_values
    ok = (T <= grid.t_end - margin * grid.dt) \
        & (r + (T - 1.0) <= grid.r[-1] - margin)
    if not ok[0]:
        raise ValueError(
            f"slice s={table.s} escapes the computed rectangle at "
            f"(r={r[0]:.6g}, t={T[0]:.6g})")
    idx = np.nonzero(~ok)[0]
    return float(r[-1] if len(idx) == 0 else r[idx[0] - 1])


@dataclass
class SliceData:
    """One sampled leaf: quadrature sample, field values, time table."""

    sample: SliceSample
    field: FieldOnSlice
    table: TimeFunctionTable


def sample_on_slices(grid: SpacetimeGrid, s_list, *, which: str = "u",
                     tables: dict | None = None, n_slice: int = 601,
                     r_max_slice=None, pad: float = 4.0,
                     ode_tol: float = 1e-10) -> dict:
    """Interpolate a stored field onto foliation leaves.

    Returns {s: SliceData}.  The sampled radial extent is the Euclidean
    boundary plus ``pad``, clipped to the rectangle the grid actually
    computed; an explicitly requested ``r_max_slice`` escaping that
    rectangle is an error.
    """
    if which not in ("u", "v"):
        raise ValueError("which must be 'u' or 'v'")
    spline = grid.spline(which)
    spline_t = grid.spline(which + "t")

    out = {}
    for s in s_list:
        table = tables.get(s) if tables else None
        if table is None:
            table = build_time_function(
                s, grid.r[-1], ode_tol)
        safe = _safe_slice_radius(grid, table)
        if r_max_slice is not None:
            want = float(r_max_slice(s)) if callable(r_max_slice) \
                else float(r_max_slice)
            if want > safe:
                t_bad = float(table.eval_T(min(want, table.r_max)))
                raise ValueError(
                    f"slice s={s} escapes the computed rectangle at "
                    f"(r={want:.6g}, t={t_bad:.6g})")
            R = want
        else:
            R = min(exterior_boundary(s) + pad, safe)
        sample = slice_points(s, R, n_slice, "geometric", table=table)
        vals = spline.ev(sample.t, sample.r)
        vt = spline_t.ev(sample.t, sample.r)
        vr = spline.ev(sample.t, sample.r, dy=1)
        out[s] = SliceData(sample=sample,
                           field=FieldOnSlice(sample=sample, v=vals,
                                              vt=vt, vr=vr),
                           table=table)
    return out


def decay_series(grid: SpacetimeGrid, s_list, region: Region, *,
                 which: str = "u", measure: str = "abs",
                 n_slice: int = 601, pad: float = 4.0,
                 r_window=None) -> list[dict]:
    """Per-slice sup norms over one region, with characteristic times.

    measure 'abs' takes sup |u|; 'envelope' takes sup sqrt(u^2 + u_t^2),
    which removes the mass-driven phase oscillation of Klein-Gordon
    solutions.  ``r_window=(lo, hi)`` restricts the sup to a fixed radial
    window inside the region (an s-uniform probe set; without it the
    rectangle clipping makes the sampled velocity range shrink with s).
    The characteristic time is s for the interior region (the leaf time
    at the axis) and the leaf time at the sup node otherwise.
    """
    samples = sample_on_slices(grid, s_list, which=which,
                               n_slice=n_slice, pad=pad)
    rows = []
    for s in s_list:
        sample, fos = samples[s].sample, samples[s].field
        mask = sample.region_mask(region)
        if r_window is not None:
            mask = mask & (sample.r >= r_window[0]) \
                & (sample.r <= r_window[1])
        if not np.any(mask):
            continue
        if measure == "abs":
            vals = np.abs(fos.v[mask])
        elif measure == "envelope":
            vals = np.hypot(fos.v[mask], fos.vt[mask])
        else:
            raise ValueError(f"unknown measure {measure!r}")
        k = int(np.argmax(vals))
        t_char = float(s) if region is Region.INTERIOR \
            else float(sample.t[mask][k])
        rows.append({"s": float(s), "region": region.value,
                     "sup": float(vals[k]), "t_char": t_char,
                     "r_sup": float(sample.r[mask][k])})
    return rows


@dataclass
class DecayFit:
    exponent: float
    stderr: float
    n_slices: int
    window: tuple


def fit_decay(sups, t_chars, window=None) -> DecayFit:
    """Least-squares slope of log(sup) against log(t_char)."""
    sups = np.asarray(sups, dtype=float)
    t_chars = np.asarray(t_chars, dtype=float)
    if window is not None:
        lo, hi = window
        m = (t_chars >= lo) & (t_chars <= hi)
        sups, t_chars = sups[m], t_chars[m]
    if len(sups) < 6:
        raise ValueError("decay fit needs at least 6 slices")
    if np.any(sups <= 0.0):
        raise ValueError("decay fit needs positive sup norms")
    lx = np.log(t_chars)
    ly = np.log(sups)
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, _, _, _ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    dof = max(len(lx) - 2, 1)
    cov = (resid @ resid) / dof * np.linalg.inv(A.T @ A)
    return DecayFit(exponent=float(coef[0]), stderr=float(np.sqrt(cov[0, 0])),
                    n_slices=len(lx),
                    window=(float(t_chars.min()), float(t_chars.max())))


# ---------------------------------------------------------------------------
# Manufactured-solution convergence
# ---------------------------------------------------------------------------

def manufactured_convergence(base_config: EvolutionConfig, exact, exact_t,
                             source, grids, *, lagged_boundary: bool = False):
    """Observed convergence order against a manufactured exact solution.

    ``exact``/``exact_t`` are callables (t, r) for the solution and its
    time derivative; ``source`` is the residual forcing making the exact
    solution solve the configured equation.  Returns errors per grid, the
    pairwise orders, and the least-squares order.
    """
    errors = []
    hs = []
    for n_r in grids:
        cfg = EvolutionConfig(**{**base_config.__dict__, "n_r": n_r,
                                 "boundary": "exact"})

        def boundary(t, R=cfg.r_max):
            return float(np.asarray(exact(t, np.asarray(R)))), 0.0

        grid = evolve_radial(
            cfg, source_u=source,
            initial=(lambda r: exact(1.0, r), lambda r: exact_t(1.0, r),
                     lambda r: np.zeros_like(r), lambda r: np.zeros_like(r)),
            boundary_values=boundary,
            _lagged_boundary=lagged_boundary)
        err = np.max(np.abs(grid.u[-1] - exact(grid.t_end, grid.r)))
        errors.append(float(err))
        hs.append(grid.dr)
    orders = [float(np.log2(errors[i] / errors[i + 1]))
              for i in range(len(errors) - 1)
              if errors[i + 1] > 0]
    if min(errors) == 0.0:  # exact reproduction (e.g. the zero solution)
        return {"grids": list(grids), "errors": errors, "orders": orders,
                "order": float("inf")}
    lx = np.log(hs)
    ly = np.log(errors)
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, _, _, _ = np.linalg.lstsq(A, ly, rcond=None)
    return {"grids": list(grids), "errors": errors, "orders": orders,
            "order": float(coef[0])}
