import numpy as np
import pytest

from helpers import random_smooth_radial

from ehfol.energy import (FieldOnSlice, energy_flat_form, energy_frame_form,
                          energy_on_slice, energy_series, sample_field, zeta)
from ehfol.foliation import slice_points
from ehfol.waves import free_wave_field


def _zero(t, r):
    return np.zeros_like(np.asarray(r, dtype=float))


@pytest.mark.parametrize("r,expected", [
    (2.0, np.sqrt(9.0 / 13.0)),   # hyperboloidal part
    (10.0, 1.0),                  # Euclidean part
    (0.0, 1.0),                   # axis
])
def test_zeta_examples(table_s3, r, expected):
    assert float(zeta(3.0, r, table_s3)) == pytest.approx(expected,
                                                          rel=1e-9)


def test_zero_field_has_zero_energy(table_s3):
    sample = slice_points(3.0, 20.0, 101, table=table_s3)
    field = sample_field(_zero, _zero, _zero, sample)
    assert energy_frame_form(field, 1.0, 1.0, table_s3) == 0.0
    assert energy_flat_form(field, 1.0, 1.0, table_s3) == 0.0


def test_energy_matches_refined_reference(tables_234):
    # refinement oracle: 8x the node count changes the value below 1e-6 rel
    table = tables_234[2.0]
    def v(t, r):
        return np.exp(-np.asarray(r) ** 2)

    def vr(t, r):
        r = np.asarray(r)
        return -2.0 * r * np.exp(-r ** 2)

    vals = {}
    for n in (1601, 12808):
        sample = slice_points(2.0, table.r_max, n, table=table)
        field = sample_field(v, _zero, vr, sample)
        vals[n] = energy_frame_form(field, 1.0, 1.0, table)
    assert vals[1601] == pytest.approx(vals[12808], rel=1e-6)


def test_flat_and_frame_forms_agree(tables_234, rng):
    for s, table in tables_234.items():
        sample = slice_points(s, table.r_max, 301, table=table)
        for _ in range(5):
            v, vr = random_smooth_radial(rng)
            vt, _ = random_smooth_radial(rng)
            field = sample_field(v, vt, vr, sample)
            ef = energy_flat_form(field, 0.5, 1.0, table)
            eg = energy_frame_form(field, 0.5, 1.0, table)
            assert abs(ef - eg) <= 1e-10 * (1.0 + ef)


def test_mass_term_scales_quadratically(table_s3):
    # constant v with zero derivatives: E is the pure mass term
    sample = slice_points(3.0, 20.0, 201, table=table_s3)
    one = lambda t, r: np.ones_like(np.asarray(r, dtype=float))
    field = sample_field(one, _zero, _zero, sample)
    e1 = energy_frame_form(field, 0.5, 1.0, table_s3)
    e2 = energy_frame_form(field, 0.5, 2.0, table_s3)
    assert e2 == pytest.approx(4.0 * e1, rel=1e-13)
    e0 = energy_frame_form(field, 0.5, 0.0, table_s3)
    assert e0 == 0.0


def test_energy_monotone_in_eta_for_exterior_support(table_s3):
    # v supported past the light cone: the weight grows with eta there
    def v(t, r):
        return np.exp(-((np.asarray(r) - t - 3.0) ** 2))

    def vr(t, r):
        q = np.asarray(r) - t - 3.0
        return -2.0 * q * np.exp(-(q ** 2))

    sample = slice_points(3.0, 20.0, 501, table=table_s3)
    field = sample_field(v, _zero, vr, sample)
    e_small = energy_frame_form(field, 0.3, 1.0, table_s3)
    e_large = energy_frame_form(field, 0.8, 1.0, table_s3)
    assert e_large > e_small > 0.0


def test_region_partials_add_to_total(table_s3, rng):
    sample = slice_points(3.0, 20.0, 301, table=table_s3)
    v, vr = random_smooth_radial(rng)
    vt, _ = random_smooth_radial(rng)
    field = sample_field(v, vt, vr, sample)
    row = energy_on_slice(field, 0.5, 1.0, table_s3)
    total = row["E_interior"] + row["E_transition"] + row["E_exterior"]
    assert total == pytest.approx(row["E_frame"], rel=1e-14)


def test_positive_definite_for_positive_mass(table_s3, rng):
    sample = slice_points(3.0, 20.0, 201, table=table_s3)
    v, vr = random_smooth_radial(rng)
    field = sample_field(v, _zero, vr, sample)
    assert energy_frame_form(field, 0.5, 1.0, table_s3) > 0.0


def test_interior_support_sees_no_weight(table_s3):
    # v supported in r < t - 1: exterior partials vanish and the weight
    # never activates, so the energy is eta-independent
    def v(t, r):
        return np.exp(-(np.asarray(r) / 0.5) ** 2)

    def vr(t, r):
        r = np.asarray(r)
        return -2.0 * r / 0.25 * np.exp(-(r / 0.5) ** 2)

    sample = slice_points(3.0, 20.0, 501, table=table_s3)
    field = sample_field(v, _zero, vr, sample)
    row = energy_on_slice(field, 0.5, 1.0, table_s3)
    assert row["E_exterior"] <= 1e-20 * row["E_frame"]
    assert row["E_transition"] <= 1e-20 * row["E_frame"]
    e_lo = energy_frame_form(field, 0.2, 1.0, table_s3)
    e_hi = energy_frame_form(field, 0.9, 1.0, table_s3)
    assert e_lo == pytest.approx(e_hi, rel=1e-12)


def test_free_wave_energy_nearly_conserved():
    # closed-form d'Alembert oracle; the slice energy of the free wave
    # stays within a factor 1.1 across the foliation
    v, vt, vr = free_wave_field(1.0, 0.35, 1.0)
    rep = energy_series([2.0, 3.0, 4.0, 5.0, 6.0], v, vt, vr,
                        eta=0.1, c=0.0, n=1201)
    assert float(rep.E_frame.max() / rep.E_frame.min()) < 1.1
    assert np.all(rep.form_gap <= 1e-10 * (1.0 + rep.E_flat))


def test_energy_series_zero_field():
    rep = energy_series([2.0, 3.0], _zero, _zero, _zero, eta=0.5, c=1.0,
                        n=101)
    assert np.all(rep.E_frame == 0.0)
    assert np.all(rep.E_flat == 0.0)
    assert np.all(rep.E_interior == 0.0)


def test_field_on_slice_validates_shape(table_s3):
    sample = slice_points(3.0, 20.0, 101, table=table_s3)
    n = len(sample.r)
    with pytest.raises(ValueError):
        FieldOnSlice(sample=sample, v=np.zeros(n - 1), vt=np.zeros(n),
                     vr=np.zeros(n))
    bad = np.zeros(n)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        FieldOnSlice(sample=sample, v=bad, vt=np.zeros(n), vr=np.zeros(n))
