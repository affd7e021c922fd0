"""Construction of the Euclidean-hyperboloidal time function and slices.

The time function T(s, r) solves

    dT/dr = chi(s-1) * xi(s, r) * r / sqrt(r^2 + s^2),    T(s, 0) = s,

so each leaf {t = T(s, |x|)} coincides with the hyperboloid t^2 = s^2 + r^2
inside the light cone, is flat (constant t) far outside, and interpolates
smoothly across a unit-width annulus near the cone.  This module integrates
that ODE, tabulates T and its derivatives, classifies the three spacetime
regions, and produces quadrature-ready radial samples of a leaf.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .cutoffs import CutoffProfile, default_profile, xi, xi_dr

__all__ = ["Region", "TimeFunctionTable", "build_time_function",
           "eval_T", "eval_drT", "eval_dsT", "classify_region",
           "SliceSample", "slice_points", "radial_quadrature",
           "interior_boundary", "exterior_boundary", "drT_closed_form",
           "drT_dr_closed_form"]


class Region(enum.Enum):
    INTERIOR = "interior"
    TRANSITION = "transition"
    EXTERIOR = "exterior"


def interior_boundary(s: float) -> float:
    """Outer radius of the hyperboloidal region: r = -1 + s^2/2."""
    return -1.0 + 0.5 * s * s


def exterior_boundary(s: float) -> float:
    """Inner radius of the Euclidean region: r = s^2/2."""
    return 0.5 * s * s


def classify_region(s: float, r) -> Region:
    """Region tag for radius r on the leaf with parameter s.

    Boundary tie-break is fixed: the interior and exterior are closed,
    the transition annulus is the open interval between them.  Requires
    s >= 2 (the regime where the slice estimates are formulated).
    """
    if s < 2.0:
        raise ValueError(f"classify_region requires s >= 2, got s={s}")
    return _region_of(s, float(r))


def _region_of(s: float, r: float) -> Region:
    if r <= interior_boundary(s):
        return Region.INTERIOR
    if r >= exterior_boundary(s):
        return Region.EXTERIOR
    return Region.TRANSITION


def drT_closed_form(s: float, r, profile: CutoffProfile | None = None):
    """dT/dr directly from the defining ODE's right-hand side."""
    profile = profile or default_profile()
    r = np.asarray(r, dtype=float)
    cs = profile.chi(float(s) - 1.0)
    if cs == 0.0:
        return np.zeros_like(r)
    return cs * xi(s, r, profile) * r / np.sqrt(r * r + s * s)


def drT_dr_closed_form(s: float, r, profile: CutoffProfile | None = None):
    """Exact d^2T/dr^2, by differentiating the ODE right-hand side."""
    profile = profile or default_profile()
    r = np.asarray(r, dtype=float)
    cs = profile.chi(float(s) - 1.0)
    if cs == 0.0:
        return np.zeros_like(r)
    hyp = np.sqrt(r * r + s * s)
    return cs * (xi_dr(s, r, profile) * r / hyp
                 + xi(s, r, profile) * s * s / hyp ** 3)


@dataclass
class TimeFunctionTable:
    """Tabulated T(s, .), dT/dr and dT/ds on a radial grid for fixed s.

    dT/ds requires two further ODE integrations and is computed on first
    access.
    """

    s: float
    r_nodes: np.ndarray
    T_values: np.ndarray
    drT_values: np.ndarray
    ode_tol: float
    _dsT_factory: object = field(default=None, repr=False)
    _dsT_values: np.ndarray | None = field(default=None, repr=False)
    _interp_T: PchipInterpolator | None = field(default=None, repr=False)
    _interp_drT: PchipInterpolator | None = field(default=None, repr=False)
    _interp_dsT: PchipInterpolator | None = field(default=None, repr=False)

    @property
    def dsT_values(self) -> np.ndarray:
        if self._dsT_values is None:
            self._dsT_values = self._dsT_factory()
        return self._dsT_values

    @property
    def r_max(self) -> float:
        return float(self.r_nodes[-1])

    def _check_range(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < -1e-12) or np.any(r > self.r_max * (1 + 1e-12)):
            raise ValueError(
                f"radius outside table range [0, {self.r_max}]")
        return np.clip(r, 0.0, self.r_max)

    def eval_T(self, r):
        r = self._check_range(r)
        if self._interp_T is None:
            self._interp_T = PchipInterpolator(self.r_nodes, self.T_values)
        return self._interp_T(r)

    def eval_drT(self, r):
        r = self._check_range(r)
        if self._interp_drT is None:
            self._interp_drT = PchipInterpolator(self.r_nodes, self.drT_values)
        return self._interp_drT(r)

    def eval_dsT(self, r):
        r = self._check_range(r)
        if self._interp_dsT is None:
            self._interp_dsT = PchipInterpolator(self.r_nodes, self.dsT_values)
        return self._interp_dsT(r)


def _integrate_T(s: float, r_nodes: np.ndarray, ode_tol: float,
                 profile: CutoffProfile) -> np.ndarray:
    """Integrate the time-function ODE, returning T at the given nodes."""
    cs = profile.chi(float(s) - 1.0)
    if cs == 0.0:
        # chi(s-1) annihilates the right-hand side: the leaf is {t = s}
        return np.full_like(r_nodes, float(s))

    def rhs(r, _T):
        return cs * (1.0 - profile.chi(r + 1.0 - 0.5 * s * s)) \
            * r / np.hypot(r, s)

    sol = solve_ivp(rhs, (0.0, float(r_nodes[-1])), [float(s)],
                    method="DOP853", rtol=ode_tol, atol=ode_tol * 1e-2,
                    t_eval=r_nodes)
    if not sol.success:
        raise RuntimeError(f"time-function ODE failed: {sol.message}")
    return sol.y[0]


def build_time_function(s: float, r_max: float, ode_tol: float = 1e-10,
                        n_nodes: int | None = None,
                        profile: CutoffProfile | None = None
                        ) -> TimeFunctionTable:
    """Integrate the time-function ODE and tabulate T, dT/dr, dT/ds.

    dT/dr comes from the ODE right-hand side (exact at the nodes); dT/ds
    is a centered difference of two re-integrations at s(1 +- 1e-4).
    """
    if s < 1.0:
        raise ValueError(f"time function requires s >= 1, got s={s}")
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    if not 0.0 < ode_tol <= 1e-4:
        raise ValueError(f"ode_tol must lie in (0, 1e-4], got {ode_tol}")
    profile = profile or default_profile()
    if n_nodes is None:
        n_nodes = int(np.clip(round(r_max / 0.025) + 1, 801, 20001))
    r_nodes = np.linspace(0.0, r_max, n_nodes)

    T = _integrate_T(s, r_nodes, ode_tol, profile)
    drT = drT_closed_form(s, r_nodes, profile)

    def make_dsT():
        delta = 1e-4 * s
        T_plus = _integrate_T(s + delta, r_nodes, ode_tol, profile)
        T_minus = _integrate_T(s - delta, r_nodes, ode_tol, profile)
        return (T_plus - T_minus) / (2.0 * delta)

    return TimeFunctionTable(s=float(s), r_nodes=r_nodes, T_values=T,
                             drT_values=drT, ode_tol=float(ode_tol),
                             _dsT_factory=make_dsT)


def eval_T(table: TimeFunctionTable, r):
    return table.eval_T(r)


def eval_drT(table: TimeFunctionTable, r):
    return table.eval_drT(r)


def eval_dsT(table: TimeFunctionTable, r):
    return table.eval_dsT(r)


# ---------------------------------------------------------------------------
# Radial quadrature and slice samples
# ---------------------------------------------------------------------------

def _simpson_pair_weights(x: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on nodes x (even interval count).

    Works on non-uniform grids via the interpolatory three-point rule per
    pair of adjacent intervals; exact for quadratics, so the 4*pi*r^2
    measure integrates constants exactly.
    """
    m = len(x) - 1
    if m < 2 or m % 2 != 0:
        raise ValueError("need an even number (>= 2) of intervals")
    w = np.zeros_like(x)
    i = np.arange(0, m, 2)
    h0 = x[i + 1] - x[i]
    h1 = x[i + 2] - x[i + 1]
    tot = h0 + h1
    np.add.at(w, i, tot / 6.0 * (2.0 - h1 / h0))
    np.add.at(w, i + 1, tot ** 3 / (6.0 * h0 * h1))
    np.add.at(w, i + 2, tot / 6.0 * (2.0 - h0 / h1))
    return w


def radial_quadrature(r_lo: float, r_hi: float, n: int):
    """Uniform Simpson nodes/weights for integrals f -> int f 4 pi r^2 dr."""
    if n < 3:
        raise ValueError("need at least 3 nodes")
    m = n - 1 + ((n - 1) % 2)  # even interval count
    r = np.linspace(r_lo, r_hi, m + 1)
    w = _simpson_pair_weights(r) * 4.0 * np.pi * r * r
    return r, w


def _geometric_nodes(lo: float, hi: float, m: int, h_anchor: float,
                     anchor: str) -> np.ndarray:
    """m intervals on [lo, hi], spacing geometric from h_anchor at one end.

    anchor='hi' puts the finest spacing at hi (interior side of the
    annulus); 'lo' puts it at lo.  Falls back to uniform when the solved
    ratio leaves (0.55, 1.8), which keeps all Simpson weights positive.
    """
    length = hi - lo
    if m < 2 or h_anchor <= 0 or length <= 0:
        return np.linspace(lo, hi, m + 1)

    def total(g):
        if abs(g - 1.0) < 1e-12:
            return h_anchor * m
        return h_anchor * (g ** m - 1.0) / (g - 1.0)

    # keep g^m within floating range for large m
    g_max = min(1.8, float(np.exp(500.0 / m)))
    if g_max <= 0.55 + 1e-9:
        return np.linspace(lo, hi, m + 1)
    f_lo, f_hi = total(0.55) - length, total(g_max) - length
    if f_lo > 0.0 or f_hi < 0.0:
        return np.linspace(lo, hi, m + 1)
    g = brentq(lambda q: total(q) - length, 0.55, g_max, xtol=1e-14)
    steps = h_anchor * g ** np.arange(m)
    steps *= length / steps.sum()
    if anchor == "hi":
        nodes = hi - np.concatenate(([0.0], np.cumsum(steps)))
        nodes = nodes[::-1].copy()
    else:
        nodes = lo + np.concatenate(([0.0], np.cumsum(steps)))
    # cumulative sums drift by ulps; the segment ends must be exact
    nodes[0] = lo
    nodes[-1] = hi
    return nodes


def _even(k: int) -> int:
    return max(2, k + (k % 2))


def _graded_grid(s: float, r_max: float, n: int) -> np.ndarray:
    """Radial grid with ~40% of nodes in the transition annulus."""
    a = max(interior_boundary(s), 0.0)
    b = exterior_boundary(s)
    if a <= 0.0 or a >= r_max:
        return np.linspace(0.0, r_max, _even(n - 1) + 1)

    b_eff = min(b, r_max)
    m_total = _even(n - 1)
    if b_eff <= a + 1e-12:
        m_int = _even(int(round(m_total * a / r_max)))
        m_int = min(m_int, m_total - 2)
        inner = np.linspace(0.0, a, m_int + 1)
        outer = np.linspace(a, r_max, m_total - m_int + 1)
        return np.concatenate([inner, outer[1:]])

    m_tran = _even(int(round(0.4 * m_total)))
    rest = m_total - m_tran
    len_int, len_ext = a, max(r_max - b_eff, 0.0)
    if len_ext <= 1e-12:
        m_int, m_ext = rest, 0
    else:
        m_int = _even(int(round(rest * len_int / (len_int + len_ext))))
        m_int = int(np.clip(m_int, 2, rest - 2))
        m_ext = rest - m_int
    h_tran = (b_eff - a) / m_tran

    parts = [_geometric_nodes(0.0, a, m_int, h_tran, anchor="hi"),
             np.linspace(a, b_eff, m_tran + 1)[1:]]
    if m_ext:
        parts.append(_geometric_nodes(b_eff, r_max, m_ext, h_tran,
                                      anchor="lo")[1:])
    return np.concatenate(parts)


@dataclass
class SliceSample:
    """Quadrature nodes on a leaf: radii, times, region tags and weights.

    Weights include the 4*pi*r^2 radial measure, so a slice integral of a
    sampled integrand f is ``np.dot(sample.weights, f)``.
    """

    s: float
    r: np.ndarray
    t: np.ndarray
    weights: np.ndarray
    region: np.ndarray  # Region enum per node

    def region_mask(self, region: Region) -> np.ndarray:
        return self.region == region

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def slice_points(s: float, r_max: float, n: int,
                 grading: str = "geometric", *,
                 table: TimeFunctionTable | None = None,
                 ode_tol: float = 1e-10,
                 profile: CutoffProfile | None = None) -> SliceSample:
    """Quadrature-ready sample of the leaf with parameter s on [0, r_max]."""
    if n < 16:
        raise ValueError(f"need n >= 16 nodes, got {n}")
    if grading not in ("uniform", "geometric"):
        raise ValueError(f"unknown grading {grading!r}")
    profile = profile or default_profile()

    if grading == "uniform":
        r = np.linspace(0.0, r_max, _even(n - 1) + 1)
    else:
        r = _graded_grid(s, r_max, n)

    if table is not None:
        t = np.asarray(table.eval_T(r), dtype=float)
    else:
        t = _integrate_T(s, r, ode_tol, profile)

    w = _simpson_pair_weights(r) * 4.0 * np.pi * r * r
    region = np.array([_region_of(s, float(ri)) for ri in r], dtype=object)
    return SliceSample(s=float(s), r=r, t=t, weights=w, region=region)
