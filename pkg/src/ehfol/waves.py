"""Closed-form radial solutions used as reference fields.

The free radial wave with even initial profile g and zero initial
velocity has the d'Alembert form

    u(t, r) = (w0(tau + r) - w0(tau - r)) / (2 r),   tau = t - 1,

where w0(z) = z g(z) is odd, so the axis limit is w0'(tau).  These
callables provide (u, u_t, u_r) everywhere, with series limits through
the axis, and serve as an independent oracle for the radial solver and
as a ready-made field for energy evaluations.
"""

from __future__ import annotations

import numpy as np

__all__ = ["free_wave_field"]


def free_wave_field(amplitude: float = 1.0, width: float = 0.35,
                    center: float = 1.0):
    """(u, u_t, u_r) of the free radial wave from an even Gaussian pair.

    Initial data at t=1: u = amplitude * [G(r-center) + G(r+center)] with
    G a Gaussian of the given width, and zero initial velocity.
    """
    w2 = width * width

    def g(z):
        return np.exp(-((z - center) ** 2) / w2) \
            + np.exp(-((z + center) ** 2) / w2)

    def gp(z):
        return (-2.0 * (z - center) / w2 * np.exp(-((z - center) ** 2) / w2)
                - 2.0 * (z + center) / w2 * np.exp(-((z + center) ** 2) / w2))

    def w0(z):
        return amplitude * z * g(z)

    def w0p(z):
        return amplitude * (g(z) + z * gp(z))

    def _split(t, r):
        tau = np.asarray(t, dtype=float) - 1.0
        r = np.asarray(r, dtype=float)
        return tau + r, tau - r, r

    def u(t, r):
        p, q, r = _split(t, r)
        small = np.abs(r) < 1e-6
        rs = np.where(small, 1.0, r)
        tau = 0.5 * (p + q)
        return np.where(small, w0p(tau), (w0(p) - w0(q)) / (2.0 * rs))

    def ut(t, r):
        p, q, r = _split(t, r)
        small = np.abs(r) < 1e-6
        rs = np.where(small, 1.0, r)
        tau = 0.5 * (p + q)
        h = 1e-5
        limit = (w0p(tau + h) - w0p(tau - h)) / (2.0 * h)
        return np.where(small, limit, (w0p(p) - w0p(q)) / (2.0 * rs))

    def ur(t, r):
        p, q, r = _split(t, r)
        small = np.abs(r) < 1e-6
        rs = np.where(small, 1.0, r)
        val = (w0p(p) + w0p(q)) / (2.0 * rs) \
            - (w0(p) - w0(q)) / (2.0 * rs ** 2)
        return np.where(small, 0.0, val)

    return u, ut, ur
