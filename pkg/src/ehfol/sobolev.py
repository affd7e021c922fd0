"""Empirical constants for the slice Sobolev-type inequalities.

Three inequalities are probed on radial test functions:

* ext_bar  : (1+r) |u| <= C * sum of L2 norms of slice-tangent and
             rotation derivatives up to order 2 over the transition plus
             Euclidean regions,
* ext_flat : the same with plain spatial derivatives over the Euclidean
             region only,
* interior : t^{3/2} |u| <= C * sum of L2 norms of boost derivatives up
             to order 2 over the hyperboloidal region.

For radial functions the rotation terms vanish identically and every
multi-index norm reduces to a weighted radial integral; the angular
moments of the direction cosines (1/3, 1/5, 1/15) are folded in exactly.
The estimator reports the sup over probe points of LHS/RHS per quadrature
refinement level; the check is that these ratios stay bounded and
refinement-stable, not that they attain any specific value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .foliation import (TimeFunctionTable, _simpson_pair_weights,
                        build_time_function, drT_closed_form,
                        drT_dr_closed_form, exterior_boundary,
                        interior_boundary)  # noqa: F401 (re-exported names)
from .utils import ordered_map

__all__ = ["RadialField", "TestFamily", "gaussian_family", "zero_family",
           "slow_tail_family", "ConstantEstimate", "exterior_ratio",
           "interior_ratio", "constant_sweep"]

_GROWTH_ALARM = 1.25  # ratio growth per refinement level that trips the alarm


@dataclass
class RadialField:
    """Radial spacetime function with exact derivatives.

    All callables take (t, r) with array r.  ``ur_over_r`` must be the
    smooth continuation of ur/r through the axis (finite for functions
    even in r).  ``support_radius`` bounds where the field exceeds 1e-12
    of its peak; None marks a slowly decaying field.
    """

    name: str
    u: callable
    ut: callable
    ur: callable
    utt: callable
    utr: callable
    urr: callable
    ur_over_r: callable
    support_radius: float | None = None


def _gaussian_member(name, amp, width, center, mu, t0):
    """amp * exp(-mu (t-t0)^2) * [G(r-center) + G(r+center)], G Gaussian."""
    w2 = width * width

    def g(t):
        return amp * np.exp(-mu * (t - t0) ** 2)

    def gp(t):
        return -2.0 * mu * (t - t0) * g(t)

    def gpp(t):
        return (4.0 * mu * mu * (t - t0) ** 2 - 2.0 * mu) * g(t)

    def pair(r):
        return np.exp(-((r - center) ** 2) / w2) \
            + np.exp(-((r + center) ** 2) / w2)

    def pair_r(r):
        return (-2.0 * (r - center) / w2 * np.exp(-((r - center) ** 2) / w2)
                - 2.0 * (r + center) / w2 * np.exp(-((r + center) ** 2) / w2))

    def pair_rr(r):
        gm = np.exp(-((r - center) ** 2) / w2)
        gp_ = np.exp(-((r + center) ** 2) / w2)
        return ((4.0 * (r - center) ** 2 / w2 ** 2 - 2.0 / w2) * gm
                + (4.0 * (r + center) ** 2 / w2 ** 2 - 2.0 / w2) * gp_)

    def pair_r_over_r(r):
        r = np.asarray(r, dtype=float)
        gm = np.exp(-((r - center) ** 2) / w2)
        gp_ = np.exp(-((r + center) ** 2) / w2)
        # -(2/w2) [ (gm+gp) + center*(gp-gm)/r ]; the second ratio tends
        # to center * d/dr(gp-gm)(0) as r -> 0
        small = np.abs(r) < 1e-7
        rs = np.where(small, 1.0, r)
        diff = np.where(small,
                        -4.0 * center / w2 * np.exp(-(center ** 2) / w2),
                        (gp_ - gm) / rs)
        return -(2.0 / w2) * ((gm + gp_) + center * diff)

    return RadialField(
        name=name,
        u=lambda t, r: g(t) * pair(r),
        ut=lambda t, r: gp(t) * pair(r),
        ur=lambda t, r: g(t) * pair_r(r),
        utt=lambda t, r: gpp(t) * pair(r),
        utr=lambda t, r: gp(t) * pair_r(r),
        urr=lambda t, r: g(t) * pair_rr(r),
        ur_over_r=lambda t, r: g(t) * pair_r_over_r(r),
        support_radius=center + 10.0 * width)


def _slow_tail_member(name, amp, mu, t0):
    """amp * exp(-mu (t-t0)^2) * (1 + r^2)^{-1/2}: a 1/r-type tail.

    Decays too slowly for the truncation-stability assumptions; used by
    the negative-control self test.
    """
    def g(t):
        return amp * np.exp(-mu * (t - t0) ** 2)

    def gp(t):
        return -2.0 * mu * (t - t0) * g(t)

    def gpp(t):
        return (4.0 * mu * mu * (t - t0) ** 2 - 2.0 * mu) * g(t)

    def p(r):
        return (1.0 + r * r) ** -0.5

    def p_r(r):
        return -r * (1.0 + r * r) ** -1.5

    def p_rr(r):
        return (2.0 * r * r - 1.0) * (1.0 + r * r) ** -2.5

    return RadialField(
        name=name,
        u=lambda t, r: g(t) * p(r),
        ut=lambda t, r: gp(t) * p(r),
        ur=lambda t, r: g(t) * p_r(r),
        utt=lambda t, r: gpp(t) * p(r),
        utr=lambda t, r: gp(t) * p_r(r),
        urr=lambda t, r: g(t) * p_rr(r),
        ur_over_r=lambda t, r: -g(t) * (1.0 + r * r) ** -1.5,
        support_radius=None)


@dataclass
class TestFamily:
    """Named generator of radial probe functions.

    ``generate(s, region)`` returns the members adapted to a slice
    parameter and target region: 'exterior' places bumps past the
    Euclidean boundary at the configured widths; 'interior' centers them
    on the axis with widths scaled to the hyperboloidal region (a bump
    wider than the region probes nothing).
    """

    name: str
    amplitude: float = 1.0
    widths: tuple = (1.0, 2.0)
    center_offsets: tuple = (5.0, 15.0)
    interior_width_fracs: tuple = (0.35, 0.7)
    time_width: float = 0.25

    def generate(self, s: float, region: str) -> list[RadialField]:
        if self.name == "zero":
            zero = lambda t, r: np.zeros_like(np.asarray(r, dtype=float))
            return [RadialField("zero", zero, zero, zero, zero, zero, zero,
                                zero, support_radius=1.0)]
        if self.name == "slowtail":
            t0 = exterior_boundary(s) + 0.6
            return [_slow_tail_member("slowtail", self.amplitude,
                                      self.time_width, t0)]
        if self.name != "gaussian":
            raise ValueError(f"unknown family {self.name!r}")
        members = []
        if region == "interior":
            for frac in self.interior_width_fracs:
                members.append(_gaussian_member(
                    f"axis_f{frac:g}", self.amplitude,
                    frac * interior_boundary(s), 0.0, self.time_width, s))
        else:
            base = exterior_boundary(s)
            for off in self.center_offsets:
                for w in self.widths:
                    members.append(_gaussian_member(
                        f"r{off:g}_w{w:g}", self.amplitude, w, base + off,
                        self.time_width, base + 0.6))
        return members


def gaussian_family(amplitude: float = 1.0) -> TestFamily:
    return TestFamily(name="gaussian", amplitude=amplitude)


def zero_family() -> TestFamily:
    return TestFamily(name="zero")


def slow_tail_family(amplitude: float = 1.0) -> TestFamily:
    return TestFamily(name="slowtail", amplitude=amplitude)


@dataclass
class ConstantEstimate:
    inequality: str
    s: float
    family: str
    param: str
    levels: list[int] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)
    alarm: bool = False

    @property
    def ratio(self) -> float:
        return self.ratios[-1] if self.ratios else 0.0

    @property
    def spread(self) -> float:
        """Relative change between the two finest refinement levels."""
        if len(self.ratios) < 2 or self.ratios[-1] == 0.0:
            return 0.0
        return abs(self.ratios[-1] - self.ratios[-2]) / abs(self.ratios[-1])

    def check_alarm(self) -> bool:
        self.alarm = any(b > _GROWTH_ALARM * a for a, b
                         in zip(self.ratios, self.ratios[1:]) if a > 0.0)
        return self.alarm


def _radial_weights(r_lo, r_hi, n):
    m = n - 1 + ((n - 1) % 2)
    r = np.linspace(r_lo, r_hi, m + 1)
    w = _simpson_pair_weights(r) * 4.0 * np.pi * r * r
    return r, w


def _norm(w, values_sq):
    return float(np.sqrt(max(np.dot(w, values_sq), 0.0)))


def _second_order_norm_sum(w, f1, f1_over_r, f2):
    """Sum of the six second-order multi-index norms for a radial field.

    The derivative d_b d_a of a radial function splits into an angular
    identity part times f1/r and a direction-cosine part times
    (f2 - f1/r); sphere averages of the squared direction cosines give
    the 1/5, 1/3 and 1/15 moments below.  Multi-indices are unordered
    (a <= b): three diagonal plus three off-diagonal terms.
    """
    h = f2 - f1_over_r
    diag_sq = f1_over_r ** 2 + (2.0 / 3.0) * f1_over_r * h + 0.2 * h * h
    off_sq = h * h / 15.0
    return 3.0 * _norm(w, diag_sq) + 3.0 * _norm(w, off_sq)


def _probe_points(r_lo, r_hi, n_probes, rng):
    r = np.geomspace(max(r_lo, 1e-3 * r_hi), r_hi, n_probes)
    if rng is not None:
        # multiplicative jitter, clipped to the region
        r = np.clip(r * np.exp(rng.uniform(-0.02, 0.02, size=r.shape)),
                    r_lo, r_hi)
    return np.unique(np.concatenate([[r_lo], r, [r_hi]]))


def exterior_ratio(u: RadialField, s: float, table: TimeFunctionTable,
                   variant: str, *, levels: int = 3, n0: int = 129,
                   n_probes: int = 64, r_max: float | None = None,
                   probe_r=None, seed: int = 0,
                   _lhs_power: float = 1.0,
                   _extend_domain: bool = False) -> ConstantEstimate:
    """Sup over probes of (1+r)|u| divided by the derivative-norm sum.

    variant 'bar' uses the slice-tangent fields over the transition plus
    Euclidean regions; 'flat' uses plain spatial derivatives over the
    Euclidean region.  ``_lhs_power`` and ``_extend_domain`` are the
    negative-control hooks used by the sweep's self-test mode.
    """
    if s < 2.0:
        raise ValueError(f"exterior estimates require s >= 2, got s={s}")
    if variant not in ("bar", "flat"):
        raise ValueError(f"unknown variant {variant!r}")
    r_lo = interior_boundary(s) if variant == "bar" else exterior_boundary(s)
    if r_max is None:
        if u.support_radius is None:
            r_max = r_lo + 40.0
        else:
            r_max = max(u.support_radius, r_lo + 5.0)
    if probe_r is not None:
        probe_r = np.asarray(probe_r, dtype=float)
        if np.any(probe_r < r_lo - 1e-12) or np.any(probe_r > r_max + 1e-12):
            raise ValueError("probe point outside the declared region")
    rng = np.random.default_rng(seed) if seed else None

    est = ConstantEstimate(inequality="ext_" + variant, s=float(s),
                           family="", param=u.name)
    for level in range(levels):
        n = n0 * 2 ** level
        R = r_max * 2 ** level if _extend_domain else r_max
        if R > table.r_max:
            table = build_time_function(s, R * 1.01, table.ode_tol)
        r, w = _radial_weights(r_lo, R, n)
        T = np.asarray(table.eval_T(r), dtype=float)
        if variant == "bar":
            a = drT_closed_form(s, r)
            a2 = drT_dr_closed_form(s, r)
            f1 = a * u.ut(T, r) + u.ur(T, r)
            f2 = a2 * u.ut(T, r) + a * a * u.utt(T, r) \
                + 2.0 * a * u.utr(T, r) + u.urr(T, r)
        else:
            f1 = u.ur(T, r)
            f2 = u.urr(T, r)
        vals = u.u(T, r)
        rhs = _norm(w, vals ** 2) + 3.0 * _norm(w, f1 ** 2 / 3.0) \
            + _second_order_norm_sum(w, f1, f1 / r, f2)

        rp = probe_r if probe_r is not None \
            else _probe_points(r_lo, R, n_probes, rng)
        Tp = np.asarray(table.eval_T(rp), dtype=float)
        lhs = (1.0 + rp) ** _lhs_power * np.abs(u.u(Tp, rp))
        est.levels.append(n)
        est.ratios.append(0.0 if rhs == 0.0 else float(lhs.max() / rhs))
    est.check_alarm()
    return est


def interior_ratio(u: RadialField, s: float, *, levels: int = 3,
                   n0: int = 129, n_probes: int = 64, probe_r=None,
                   seed: int = 0) -> ConstantEstimate:
    """Sup over probes of t^{3/2}|u| divided by the boost-norm sum.

    Probes and norms live on the hyperboloid t = sqrt(s^2 + r^2) up to
    the interior boundary; boost derivatives of a radial function reduce
    to the two radial profiles G1 = r u_t + t u_r and
    G2 = r^2 u_tt + 2 r t u_tr + t^2 u_rr + r u_r - t^2 (u_r / r).
    """
    if s < 2.0:
        raise ValueError(f"interior estimate requires s >= 2, got s={s}")
    r_hi = interior_boundary(s)
    if probe_r is not None:
        probe_r = np.asarray(probe_r, dtype=float)
        if np.any(probe_r < 0.0) or np.any(probe_r > r_hi + 1e-12):
            raise ValueError("probe point outside the declared region")
    rng = np.random.default_rng(seed) if seed else None

    est = ConstantEstimate(inequality="interior", s=float(s), family="",
                           param=u.name)
    for level in range(levels):
        n = n0 * 2 ** level
        r, w = _radial_weights(0.0, r_hi, n)
        t = np.sqrt(s * s + r * r)
        ut, ur = u.ut(t, r), u.ur(t, r)
        ur_r = u.ur_over_r(t, r)
        G1 = r * ut + t * ur
        G1_over_r = ut + t * ur_r
        G2 = r * r * u.utt(t, r) + 2.0 * r * t * u.utr(t, r) \
            + t * t * u.urr(t, r) + r * ur - t * t * ur_r
        tG1r = t * G1_over_r  # = (t/r) G1, finite through the axis
        diag_sq = 0.2 * G2 * G2 + (2.0 / 3.0) * G2 * tG1r + tG1r ** 2
        rhs = _norm(w, u.u(t, r) ** 2) + 3.0 * _norm(w, G1 ** 2 / 3.0) \
            + 3.0 * _norm(w, diag_sq) + 3.0 * _norm(w, G2 ** 2 / 15.0)

        rp = probe_r if probe_r is not None \
            else _probe_points(0.0, r_hi, n_probes, rng)
        tp = np.sqrt(s * s + rp * rp)
        lhs = tp ** 1.5 * np.abs(u.u(tp, rp))
        est.levels.append(n)
        est.ratios.append(0.0 if rhs == 0.0 else float(lhs.max() / rhs))
    est.check_alarm()
    return est


def constant_sweep(family: TestFamily, s_list, *, refinements: int = 3,
                   inequalities=("ext_bar", "ext_flat", "interior"),
                   seed: int = 0, self_test: bool = False,
                   ode_tol: float = 1e-10) -> list[ConstantEstimate]:
    """Run the ratio estimators over a family and several slices.

    ``self_test=True`` is the negative control: the exterior LHS weight is
    mis-scaled to (1+r)^2 and the truncation radius doubles per refinement
    level, which must trip the growth alarm on slowly decaying members.
    """
    lhs_power = 2.0 if self_test else 1.0
    tables: dict[float, TimeFunctionTable] = {}
    if any(ineq != "interior" for ineq in inequalities):
        for s in s_list:
            tables[s] = build_time_function(
                s, exterior_boundary(s) + 60.0, ode_tol)

    tasks = []
    for s in s_list:
        for ineq in inequalities:
            region = "interior" if ineq == "interior" else "exterior"
            for member in family.generate(s, region):
                tasks.append((s, ineq, member))

    def run(task):
        s, ineq, member = task
        if ineq == "interior":
            est = interior_ratio(member, s, levels=refinements, seed=seed)
        else:
            est = exterior_ratio(member, s, tables[s], ineq.split("_")[1],
                                 levels=refinements, seed=seed,
                                 _lhs_power=lhs_power,
                                 _extend_domain=self_test)
        est.family = family.name
        return est

    out = ordered_map(run, tasks)
    return sorted(out, key=lambda e: (e.inequality, e.s, e.param))
