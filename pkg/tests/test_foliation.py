import numpy as np
import pytest

from ehfol.foliation import (Region, build_time_function, classify_region,
                             drT_closed_form, eval_drT, eval_dsT, eval_T,
                             exterior_boundary, interior_boundary,
                             radial_quadrature, slice_points)


def test_interior_matches_hyperboloid(table_s3):
    # T^2 = s^2 + r^2 inside the light cone; ODE solved at tol 1e-10
    assert eval_T(table_s3, 2.0) == pytest.approx(np.sqrt(13.0), abs=1e-8)
    r = table_s3.r_nodes
    m = r <= interior_boundary(3.0)
    defect = np.abs(table_s3.T_values[m] ** 2 - (9.0 + r[m] ** 2))
    assert np.max(defect / (1.0 + table_s3.T_values[m] ** 2)) < 1e-8


def test_initial_slice_is_flat():
    table = build_time_function(1.0, 20.0, 1e-10)
    assert np.max(np.abs(table.T_values - 1.0)) == 0.0
    assert np.max(np.abs(table.drT_values)) == 0.0


def test_exterior_constancy(table_s3):
    assert eval_T(table_s3, 10.0) == pytest.approx(eval_T(table_s3, 20.0),
                                                   abs=1e-9)
    m = table_s3.r_nodes >= exterior_boundary(3.0)
    ext = table_s3.T_values[m]
    assert ext.max() - ext.min() <= 10.0 * table_s3.ode_tol


def test_eval_examples(table_s3):
    assert eval_T(table_s3, 0.0) == pytest.approx(3.0, abs=1e-14)
    assert eval_drT(table_s3, 2.0) == pytest.approx(2.0 / np.sqrt(13.0),
                                                    rel=1e-9)
    assert eval_drT(table_s3, 10.0) == 0.0


def test_eval_dsT_interior(table_s3):
    # on the hyperboloid T = sqrt(s^2+r^2), dT/ds = s/T
    assert eval_dsT(table_s3, 2.0) == pytest.approx(3.0 / np.sqrt(13.0),
                                                    rel=1e-4)
    assert eval_dsT(table_s3, 0.0) == pytest.approx(1.0, rel=1e-6)


def test_eval_rejects_out_of_range(table_s3):
    with pytest.raises(ValueError):
        eval_T(table_s3, 21.0)
    with pytest.raises(ValueError):
        eval_T(table_s3, -0.5)


def test_build_preconditions():
    with pytest.raises(ValueError):
        build_time_function(0.5, 10.0, 1e-10)
    with pytest.raises(ValueError):
        build_time_function(3.0, -1.0, 1e-10)
    with pytest.raises(ValueError):
        build_time_function(3.0, 10.0, 1e-3)


def test_drT_within_spacelike_bound(table_s3):
    r = table_s3.r_nodes
    bound = r / np.sqrt(r * r + 9.0)
    assert np.all(table_s3.drT_values >= -1e-15)
    assert np.all(table_s3.drT_values <= bound + 1e-12)
    assert np.all(table_s3.drT_values < 1.0)


@pytest.mark.parametrize("s,r,expected", [
    (3.0, 2.0, Region.INTERIOR),
    (3.0, 4.0, Region.TRANSITION),
    (3.0, 6.0, Region.EXTERIOR),
])
def test_classify_examples(s, r, expected):
    assert classify_region(s, r) is expected


def test_classify_boundary_tiebreak():
    # closed interior / closed exterior, open transition between
    assert classify_region(3.0, interior_boundary(3.0)) is Region.INTERIOR
    assert classify_region(3.0, exterior_boundary(3.0)) is Region.EXTERIOR
    assert classify_region(3.0, 0.5 * (interior_boundary(3.0)
                                       + exterior_boundary(3.0))) \
        is Region.TRANSITION


def test_classify_requires_s_at_least_two():
    with pytest.raises(ValueError, match="s >= 2"):
        classify_region(1.5, 1.0)


def test_slices_do_not_cross():
    r_probe = np.linspace(0.0, 18.0, 25)
    tables = [build_time_function(s, 20.0, 1e-10)
              for s in (1.0, 1.5, 2.0, 3.0, 4.0, 5.0)]
    prev = None
    for table in tables:
        vals = np.asarray(table.eval_T(r_probe))
        if prev is not None:
            assert np.all(vals >= prev - 1e-9)
        prev = vals


def test_interior_defect_scales_with_tolerance():
    errs = []
    for tol in (1e-5, 1e-7, 1e-9):
        table = build_time_function(3.0, 12.0, tol, n_nodes=801)
        m = table.r_nodes <= interior_boundary(3.0)
        errs.append(np.max(np.abs(table.T_values[m] ** 2
                                  - (9.0 + table.r_nodes[m] ** 2))))
    assert errs[2] < errs[0]
    assert errs[2] < 1e3 * 1e-9  # stays within a generous multiple of tol


def test_slice_ball_volume():
    sample = slice_points(3.0, 2.0, 64)
    vol = sample.integrate(np.ones_like(sample.r))
    assert vol == pytest.approx(32.0 * np.pi / 3.0, rel=1e-13)


def test_slice_gaussian_integral():
    sample = slice_points(3.0, 8.0, 800)
    val = sample.integrate(np.exp(-sample.r ** 2))
    assert val == pytest.approx(np.pi ** 1.5, abs=1e-6)


def test_slice_axis_node(table_s3):
    sample = slice_points(3.0, 20.0, 100, table=table_s3)
    assert sample.r[0] == 0.0
    assert sample.t[0] == pytest.approx(3.0, abs=1e-12)


def test_slice_weights_positive_and_regions_tagged():
    sample = slice_points(3.0, 20.0, 150)
    assert np.all(sample.weights[1:] > 0.0)  # axis weight is 0 via r^2
    assert sample.weights[0] == 0.0
    for region in Region:
        assert np.any(sample.region_mask(region))
    # about 40% of nodes resolve the transition annulus
    frac = np.mean(sample.region_mask(Region.TRANSITION))
    assert 0.25 < frac < 0.55


def test_slice_quadrature_converges_second_order_or_better():
    # segment allocation rounds with n, so individual doublings are lumpy;
    # the least-squares order over a factor-16 span must still be <= -2
    def f(r):
        return np.exp(-0.3 * r * r) * (1.0 + np.sin(r) ** 2)

    ref_sample = slice_points(3.0, 14.0, 12801)
    ref = ref_sample.integrate(f(ref_sample.r))
    ns = np.array([200, 400, 800, 1600, 3200])
    errs = []
    for n in ns:
        sample = slice_points(3.0, 14.0, int(n))
        errs.append(abs(sample.integrate(f(sample.r)) - ref))
    A = np.vstack([np.log(ns), np.ones(len(ns))]).T
    slope = np.linalg.lstsq(A, np.log(np.asarray(errs)), rcond=None)[0][0]
    assert slope <= -2.0


def test_slice_points_preconditions():
    with pytest.raises(ValueError):
        slice_points(3.0, 10.0, 8)
    with pytest.raises(ValueError):
        slice_points(3.0, 10.0, 32, grading="log")


def test_uniform_grading_also_integrates():
    sample = slice_points(2.0, 3.0, 65, grading="uniform")
    assert sample.integrate(np.ones_like(sample.r)) == pytest.approx(
        4.0 / 3.0 * np.pi * 27.0, rel=1e-12)


def test_radial_quadrature_region_integral():
    r, w = radial_quadrature(2.0, 6.0, 201)
    exact = 4.0 / 3.0 * np.pi * (6.0 ** 3 - 2.0 ** 3)
    assert np.dot(w, np.ones_like(r)) == pytest.approx(exact, rel=1e-13)


def test_drT_closed_form_matches_table(table_s3):
    # exact at the nodes (tabulated from the ODE right-hand side) and
    # within interpolation accuracy in between
    nodes = table_s3.r_nodes[::40]
    np.testing.assert_allclose(drT_closed_form(3.0, nodes),
                               np.asarray(table_s3.eval_drT(nodes)),
                               atol=1e-14)
    r = np.linspace(0.0, 19.0, 37)
    np.testing.assert_allclose(drT_closed_form(3.0, r),
                               np.asarray(table_s3.eval_drT(r)),
                               atol=1e-4)
