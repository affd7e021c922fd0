import hashlib

import numpy as np
import pytest

from helpers import kg_exact_axis

from ehfol.evolution import (BlowUpError, EvolutionConfig, decay_series,
                             evolve_radial, fit_decay,
                             manufactured_convergence, parse_coupling,
                             sample_on_slices)
from ehfol.foliation import Region
from ehfol.waves import free_wave_field


def _wave_config(n_r, r_max=20.0, t_end=8.0, **kw):
    base = dict(r_max=r_max, n_r=n_r, t_end=t_end, cfl=0.5,
                profile_u="shell", width_u=0.35, center_u=1.0, epsilon=1.0)
    base.update(kw)
    return EvolutionConfig(**base)


def _untainted(grid, margin=0.5):
    return grid.r <= grid.r[-1] - (grid.t_end - 1.0) - margin


def test_linear_wave_matches_dalembert_at_second_order():
    u_exact, _, _ = free_wave_field(1.0, 0.35, 1.0)
    errs = []
    for n_r in (400, 800):
        grid = evolve_radial(_wave_config(n_r))
        m = _untainted(grid)
        errs.append(np.max(np.abs(grid.u[-1][m]
                                  - u_exact(grid.t_end, grid.r[m]))))
    assert errs[0] < 6e-3
    assert errs[1] < errs[0] / 3.0  # O(dr^2)


def test_zero_data_stays_zero():
    cfg = _wave_config(200, epsilon=0.0, coupling_u="vt*vt",
                       coupling_v="u*v")
    grid = evolve_radial(cfg)
    assert np.all(grid.u == 0.0)
    assert np.all(grid.v == 0.0)


def test_linear_kg_bounded_and_dispersing():
    cfg = EvolutionConfig(r_max=20.0, n_r=800, t_end=9.0, cfl=0.5,
                          profile_u="none", profile_v="gaussian",
                          width_v=1.0, epsilon=1.0)
    grid = evolve_radial(cfg)
    assert np.max(np.abs(grid.v)) <= 1.0 + 1e-6  # no growth
    assert np.max(np.abs(grid.v[-1])) < 0.25     # dispersed by t=9


def test_kg_axis_value_matches_fourier_oracle():
    cfg = EvolutionConfig(r_max=25.0, n_r=1500, t_end=10.0, cfl=0.5,
                          profile_u="none", profile_v="gaussian",
                          width_v=1.0, epsilon=1.0)
    grid = evolve_radial(cfg)
    for level in (len(grid.t_stored) // 2, -1):
        t = float(grid.t_stored[level])
        assert grid.v[level][0] == pytest.approx(kg_exact_axis(t),
                                                 abs=5e-5)


def test_fit_decay_exact_power_law():
    s = np.linspace(2.0, 9.0, 11)
    fit = fit_decay(s ** -1.5, s)
    assert fit.exponent == pytest.approx(-1.5, abs=1e-13)
    assert fit.stderr < 1e-12


def test_fit_decay_preconditions():
    with pytest.raises(ValueError):
        fit_decay([1.0, 0.5, 0.3], [2.0, 3.0, 4.0])  # too few slices
    with pytest.raises(ValueError):
        fit_decay([1.0, -0.5, 0.3, 0.2, 0.1, 0.05],
                  [2.0, 3.0, 4.0, 5.0, 6.0, 7.0])


def test_kg_dispersive_decay_late_window():
    # the t^{-3/2} law needs t >> 1/c: measured on slices s in [16, 40]
    # in a fixed radial window around the axis (an s-uniform probe set)
    cfg = EvolutionConfig(r_max=70.0, n_r=3000, t_end=45.0, cfl=0.5,
                          profile_u="none", profile_v="gaussian",
                          width_v=1.0, epsilon=1.0)
    grid = evolve_radial(cfg)
    svals = list(np.linspace(16.0, 40.0, 13))
    rows = decay_series(grid, svals, Region.INTERIOR, which="v",
                        measure="envelope", r_window=(0.0, 2.0))
    fit = fit_decay([r["sup"] for r in rows], [r["t_char"] for r in rows])
    assert fit.exponent == pytest.approx(-1.5, abs=0.15)


def test_sample_on_slices_interpolates_wave_oracle():
    u_exact, _, _ = free_wave_field(1.0, 0.35, 1.0)
    errs = []
    for n_r in (500, 1000):
        grid = evolve_radial(_wave_config(n_r, r_max=24.0, t_end=7.0))
        data = sample_on_slices(grid, [3.0], which="u", n_slice=200)[3.0]
        errs.append(np.max(np.abs(data.field.v
                                  - u_exact(data.sample.t, data.sample.r))))
    assert errs[1] < errs[0] / 3.0


def test_sample_slice_at_s1_recovers_initial_data():
    grid = evolve_radial(_wave_config(400, t_end=3.0))
    data = sample_on_slices(grid, [1.0], which="u", n_slice=100)[1.0]
    expected = np.exp(-(((data.sample.r - 1.0) / 0.35) ** 2)) \
        + np.exp(-(((data.sample.r + 1.0) / 0.35) ** 2))
    np.testing.assert_allclose(data.field.v, expected, atol=1e-4)
    assert np.all(data.sample.t == 1.0)


def test_slice_escaping_rectangle_is_rejected():
    grid = evolve_radial(_wave_config(300, r_max=12.0, t_end=4.0))
    with pytest.raises(ValueError, match="escapes"):
        sample_on_slices(grid, [3.0], r_max_slice=11.5)
    with pytest.raises(ValueError, match="escapes"):
        sample_on_slices(grid, [8.0])  # T(8,0)=8 > t_end


def test_flat_energy_conserved_with_reflecting_boundary():
    # unweighted wave energy on {t=const}; reflecting outer wall
    drifts = []
    for n_r in (400, 800):
        cfg = _wave_config(n_r, r_max=12.0, t_end=6.0, boundary="reflect",
                           store_stride=1)
        grid = evolve_radial(cfg)

        def energy(level):
            ur = np.gradient(grid.u[level], grid.r)
            dens = grid.ut[level] ** 2 + ur ** 2
            return np.trapezoid(dens * grid.r ** 2, grid.r)

        e0 = energy(4)  # skip the startup levels
        drift = max(abs(energy(k) - e0) for k in range(4, len(grid.t_stored)))
        drifts.append(drift / e0)
    assert drifts[0] < 0.02
    assert drifts[1] < drifts[0] / 2.5  # O(dr^2)


def test_axis_regularity():
    grid = evolve_radial(_wave_config(800, t_end=6.0))
    # second-order one-sided estimate of d_r u at the axis
    dr = grid.dr
    for level in range(len(grid.t_stored)):
        u = grid.u[level]
        ur0 = (4.0 * u[1] - 3.0 * u[0] - u[2]) / (2.0 * dr)
        assert abs(ur0) < 50.0 * dr ** 2


def test_determinism_bit_identical():
    cfg = _wave_config(300, t_end=5.0, coupling_u="0.1*u*u")
    h = []
    for _ in range(2):
        grid = evolve_radial(cfg)
        h.append(hashlib.sha256(grid.u.tobytes()
                                + grid.v.tobytes()).hexdigest())
    assert h[0] == h[1]


def test_cfl_validation_rejects_unstable_step():
    with pytest.raises(ValueError, match="cfl"):
        EvolutionConfig(r_max=10.0, n_r=100, t_end=2.0, cfl=0.7).validate()
    with pytest.raises(ValueError, match="cfl"):
        EvolutionConfig(r_max=10.0, n_r=100, t_end=2.0, cfl=0.0).validate()


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_blow_up_detected():
    # the numpy backend overflows to inf in the step before detection
    cfg = EvolutionConfig(r_max=8.0, n_r=200, t_end=8.0, cfl=0.5,
                          profile_u="gaussian", width_u=1.0, epsilon=4.0,
                          coupling_u="u*u", store_stride=5)
    with pytest.raises(BlowUpError) as exc:
        evolve_radial(cfg)
    assert 1.0 < exc.value.t_last < 8.0


def test_parse_coupling_grammar():
    coefs, ia, ib = parse_coupling("vt*vt")
    assert list(coefs) == [1.0] and len(ia) == 1
    coefs, ia, ib = parse_coupling("0.5*u*v - 2*ur + 1.5")
    np.testing.assert_allclose(coefs, [0.5, -2.0, 1.5])
    with pytest.raises(ValueError):
        parse_coupling("u*v*u")  # cubic
    with pytest.raises(ValueError):
        parse_coupling("u*w")  # unknown factor


def test_manufactured_solution_order_two():
    def exact(t, r):
        return np.exp(-t) * np.exp(-np.asarray(r, dtype=float) ** 2)

    def exact_t(t, r):
        return -exact(t, r)

    def source(t, r):
        r = np.asarray(r, dtype=float)
        return (7.0 - 4.0 * r * r) * exact(t, r)

    base = EvolutionConfig(r_max=2.0, n_r=100, t_end=3.0, cfl=0.5)
    res = manufactured_convergence(base, exact, exact_t, source,
                                   [100, 200, 400, 800])
    assert res["order"] >= 1.9
    assert all(o >= 1.9 for o in res["orders"])

    # negative control: first-order boundary treatment degrades the order
    res_bad = manufactured_convergence(base, exact, exact_t, source,
                                       [100, 200, 400, 800],
                                       lagged_boundary=True)
    assert res_bad["order"] < 1.5


def test_zero_source_zero_data_zero_error():
    def zero(t, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    base = EvolutionConfig(r_max=2.0, n_r=50, t_end=2.0, cfl=0.5)
    res = manufactured_convergence(base, zero, zero, zero, [50, 100])
    assert all(e == 0.0 for e in res["errors"])
