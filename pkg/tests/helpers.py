"""Independent oracles shared by the test modules."""

import numpy as np
from scipy.integrate import quad


def kg_exact_axis(t, width=1.0, c=1.0):
    """Exact axis value of the linear Klein-Gordon field.

    Data at t=1: u = exp(-(r/width)^2), zero velocity.  Radial Fourier
    synthesis: ghat(k) = pi^{3/2} w^3 exp(-k^2 w^2 / 4), and
    u(t, 0) = (1/2 pi^2) int k^2 ghat(k) cos(omega (t-1)) dk.
    """
    tau = t - 1.0

    def integrand(k):
        gh = np.pi ** 1.5 * width ** 3 * np.exp(-k * k * width * width / 4.0)
        om = np.hypot(k, c)
        return gh * np.cos(om * tau) * k * k / (2.0 * np.pi ** 2)

    val, _ = quad(integrand, 0.0, 40.0 / width, limit=400,
                  epsabs=1e-12, epsrel=1e-10)
    return val


def random_smooth_radial(rng, n_terms=3, r_scale=6.0):
    """Random even sum of Gaussian pairs with its exact r-derivative."""
    ks = rng.uniform(0.3, 1.5, n_terms)
    cs = rng.uniform(0.0, r_scale, n_terms)
    amps = rng.uniform(-1.0, 1.0, n_terms)

    def v(t, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for A, c0, k in zip(amps, cs, ks):
            out += A * (np.exp(-((r - c0) * k) ** 2)
                        + np.exp(-((r + c0) * k) ** 2))
        return out

    def vr(t, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for A, c0, k in zip(amps, cs, ks):
            out += A * (-2.0 * k * k * (r - c0) * np.exp(-((r - c0) * k) ** 2)
                        - 2.0 * k * k * (r + c0)
                        * np.exp(-((r + c0) * k) ** 2))
        return out

    return v, vr


def random_smooth_spacetime(rng):
    """Random anisotropic Gaussian times a low-degree polynomial on R^{1+3}."""
    t0 = rng.uniform(1.0, 2.5)
    x0 = rng.uniform(-0.8, 0.8, 3)
    widths = rng.uniform(0.6, 1.6, 4)
    lin = rng.uniform(-0.3, 0.3, 4)

    def u(t, x):
        q = ((t - t0) / widths[0]) ** 2
        for a in range(3):
            q += ((x[a] - x0[a]) / widths[a + 1]) ** 2
        poly = 1.0 + lin[0] * t + lin[1] * x[0] + lin[2] * x[1] \
            + lin[3] * x[2]
        return float(np.exp(-q) * poly)

    return u
