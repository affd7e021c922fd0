"""Smooth cut-off machinery.

Everything downstream (time function, slice weights, energy weights) is
built from one compactly supported bump and its cumulative profile:

* ``rho``          -- C-infinity bump supported on (0, 1),
* ``chi``          -- its normalized primitive, 0 below 0 and 1 above 1,
* ``xi``           -- the transition coefficient switching the slices from
                      hyperboloidal to flat across the annulus near the
                      light cone,
* ``weight_omega`` -- the exterior weight, a function of the distance
                      ``q = r - t`` to the light cone.

All functions accept scalars or numpy arrays and never return NaN.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

__all__ = ["rho", "CutoffProfile", "default_profile", "chi", "chi_prime",
           "xi", "weight_omega"]

# Below this, 1-(2y-1)^2 would overflow the exponent; the bump is zero there
# to double precision anyway.
_DENOM_FLOOR = 1e-300

# Fixed Gauss-Legendre rule used for array evaluation of chi. The bump is
# C-infinity on any closed subinterval of [0, 1]; 96 nodes reproduce the
# adaptive quadrature to ~2e-15 (checked in tests).
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def rho(y):
    """Smooth bump: exp(-2 / (1 - (2y-1)^2)) on 0 < y < 1, else 0."""
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    z = 2.0 * y - 1.0
    den = 1.0 - z * z
    out = np.zeros_like(y)
    m = den > _DENOM_FLOOR
    out[m] = np.exp(-2.0 / den[m])
    return float(out[0]) if scalar else out


class CutoffProfile:
    """The bump normalization and the cumulative cut-off function.

    Parameters
    ----------
    quadrature_tol : float
        Relative tolerance for the adaptive quadrature computing the bump
        normalization ``rho0``.
    """

    def __init__(self, quadrature_tol: float = 1e-12):
        if quadrature_tol <= 0:
            raise ValueError("quadrature_tol must be positive")
        self.quadrature_tol = quadrature_tol
        rho0, _ = quad(rho, 0.0, 1.0,
                       epsabs=quadrature_tol, epsrel=quadrature_tol, limit=200)
        self.rho0 = rho0

    def chi(self, y):
        """Normalized primitive of the bump, clamped to {0, 1} outside (0, 1).

        Scalars go through adaptive quadrature; arrays use the fixed
        Gauss-Legendre rule (same values to ~2e-15, see tests).
        """
        yv = np.asarray(y, dtype=float)
        if yv.ndim == 0:
            yf = float(yv)
            if yf <= 0.0:
                return 0.0
            if yf >= 1.0:
                return 1.0
            val, _ = quad(rho, 0.0, yf, epsabs=1e-15, epsrel=1e-13, limit=200)
            return val / self.rho0
        out = np.clip(yv, 0.0, 1.0).astype(float)
        m = (yv > 0.0) & (yv < 1.0)
        if np.any(m):
            ym = yv[m]
            nodes = 0.5 * ym[:, None] * (_GL_NODES[None, :] + 1.0)
            out[m] = (rho(nodes) @ _GL_WEIGHTS) * 0.5 * ym / self.rho0
        return out

    def chi_prime(self, y):
        """Exact derivative of chi: rho(y) / rho0."""
        return rho(y) / self.rho0


_DEFAULT: CutoffProfile | None = None


def default_profile() -> CutoffProfile:
    """Shared profile at quadrature_tol=1e-12, built once and cached."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = CutoffProfile()
    return _DEFAULT


def chi(y, profile: CutoffProfile | None = None):
    return (profile or default_profile()).chi(y)


def chi_prime(y, profile: CutoffProfile | None = None):
    return (profile or default_profile()).chi_prime(y)


def xi(s, r, profile: CutoffProfile | None = None):
    """Transition coefficient: 1 inside the light-cone annulus, 0 outside.

    Equals 1 where r + 1 - s^2/2 <= 0 and 0 where r + 1 - s^2/2 >= 1;
    strictly between on the unit-width transition annulus.
    """
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    return 1.0 - chi(r + 1.0 - 0.5 * s * s, profile)


def xi_dr(s, r, profile: CutoffProfile | None = None):
    """Exact radial derivative of the transition coefficient."""
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    return -chi_prime(r + 1.0 - 0.5 * s * s, profile)


def weight_omega(eta: float, t, r, profile: CutoffProfile | None = None):
    """Spacelike-decay weight chi(q) (1+q)^eta with q = r - t.

    Vanishes for r <= t; equals (1 + r - t)^eta one unit past the cone.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    q = r - t
    # (1+q)^eta is only needed where chi(q) > 0, i.e. q > 0
    base = np.where(q > -1.0, 1.0 + q, 1.0)
    return chi(q, profile) * base ** eta
