from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectwell import make_spec, numerov_mismatch, numerov_spectrum
from rectwell.errors import SpectrumIncomplete
from rectwell.oracle import march, propagate, region_grid, shoot
from rectwell.rootfind import find_spectrum, resolve_spec

SYM = (3.0, 1.0, 3.0)
ASYM = (2.0, 1.0, 3.0)


def test_region_grid_pins_the_endpoints():
    n, h = region_grid(2.0, 1e-3)
    assert n == 2000 and math.isclose(n * h, 2.0)
    n, h = region_grid(1.0, 0.3)
    assert n == 4 and math.isclose(n * h, 1.0)
    assert region_grid(0.001, 1.0)[0] == 2


def test_box_mode_has_tiny_mismatch():
    spec = make_spec(*SYM, 0.0)
    assert abs(numerov_mismatch(spec, math.pi**2 / 36, 1e-3)) < 1e-6


def test_zero_energy_level_found_without_special_casing():
    spec, _ = resolve_spec(make_spec(*SYM, -3.3730))
    assert abs(numerov_mismatch(spec, 0.0, 1e-3)) < 1e-4
    # also at the printed depth, before any refinement
    assert abs(numerov_mismatch(make_spec(*SYM, -3.3730), 0.0, 1e-3)) < 1e-4


def test_barrier_top_level_found_without_special_casing():
    spec = make_spec(*ASYM, 15.8550)
    assert abs(numerov_mismatch(spec, spec.v0, 1e-3)) < 1e-4


def test_mismatch_is_bounded_and_vectorized():
    spec = make_spec(*SYM, -23.1923)
    e = np.linspace(-23, 20, 501)
    w = numerov_mismatch(spec, e, 1e-2)
    assert w.shape == e.shape
    assert np.all(np.abs(w) <= 1 + 1e-12)
    assert np.allclose(w[::50], [numerov_mismatch(spec, float(x), 1e-2) for x in e[::50]])


@pytest.mark.parametrize("v0", [5.551652475612764, -0.4267632, 10.0, -23.2])
def test_closed_form_matches_stepwise_march(v0):
    spec = make_spec(*SYM, v0)
    es = [v0 - 1e-3, v0, v0 + 1e-3, 0.0, 1.0, -0.5 * abs(v0)]
    fast = numerov_mismatch(spec, np.array(es), 1e-3)
    slow = numerov_mismatch(spec, np.array(es), 1e-3, stepwise=True)
    assert np.allclose(fast, slow, atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(
    psi=st.floats(-2, 2), dpsi=st.floats(-2, 2), f=st.floats(-40, 40),
    width=st.floats(0.05, 3.0), h=st.sampled_from([1e-2, 3e-3]),
)
def test_propagate_equals_march(psi, dpsi, f, width, h):
    y1, d1 = propagate(psi, dpsi, f, width, h)
    y2, d2 = march(psi, dpsi, f, width, h)
    if f > 0:
        # closed form carries a positive factor in the tunnelling case
        n, hh = region_grid(width, h)
        t = f * hh * hh
        lam = 2 * math.asinh(math.sqrt(t / (1 - t / 12) / 4))
        factor = math.exp(-n * lam)
        y1, d1 = y1 / factor, d1 / factor
    scale = max(1.0, abs(y2), abs(d2))
    assert abs(float(y1) - y2) <= 1e-10 * scale
    assert abs(float(d1) - d2) <= 1e-10 * scale


def test_numerov_spectrum_box():
    spec = make_spec(*SYM, 0.0)
    got = numerov_spectrum(spec, 6, 1e-3)
    want = [n * n * math.pi**2 / 36 for n in range(1, 7)]
    assert np.allclose(got, want, atol=1e-6)


def test_numerov_spectrum_double_well():
    got = numerov_spectrum(make_spec(*SYM, 10.0), 6, 1e-3)
    want = [1.8201, 1.8260, 6.9444, 7.0626, 11.7571, 14.2955]
    assert np.allclose(got, want, atol=1e-3)


def test_numerov_spectrum_asymmetric_zero_energy_level():
    got = numerov_spectrum(make_spec(*ASYM, -11.2902), 6, 1e-3)
    assert abs(got[2]) < 1e-4


def test_fourth_order_convergence():
    # compare at the refined critical height, so the barrier-top level is in play
    spec, _ = resolve_spec(make_spec(*SYM, 5.5516))
    exact = np.array([lv.energy for lv in find_spectrum(spec, 6, with_nodes=False)])
    err_coarse = np.max(np.abs(numerov_spectrum(spec, 6, 0.02) - exact))
    err_fine = np.max(np.abs(numerov_spectrum(spec, 6, 0.002) - exact))
    assert err_coarse / err_fine > 5e2
    assert err_fine < 1e-6


def test_fine_grid_meets_tight_bound():
    spec = make_spec(*ASYM, 10.0)
    exact = np.array([lv.energy for lv in find_spectrum(spec, 6, with_nodes=False)])
    assert np.max(np.abs(numerov_spectrum(spec, 6, 1e-4) - exact)) < 1e-6


def test_shoot_records_grid_step():
    r = shoot(make_spec(*SYM, 0.0), 0.3, 5e-3)
    assert r.grid_step == 5e-3 and r.energy == 0.3 and -1 <= r.mismatch <= 1


def test_numerov_spectrum_rejects_bad_count():
    with pytest.raises(ValueError):
        numerov_spectrum(make_spec(*SYM, 0.0), 0)


def test_spectrum_incomplete_when_scan_is_too_coarse():
    # a step wider than the whole range finds nothing
    with pytest.raises(SpectrumIncomplete):
        numerov_spectrum(make_spec(*SYM, 0.0), 6, 1e-2, step=1e3)
