from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectwell import (
    LevelKind,
    NoConvergence,
    SpecialKind,
    SpectrumIncomplete,
    find_special_depths,
    find_special_heights,
    find_spectrum,
    make_spec,
    refine,
    resolve_spec,
    scan_brackets,
    zero_energy_hole_residual,
)
from rectwell.rootfind import SPECIAL_TOL, TOL_X, special_residual

SYM_G = (1.0, 2.0, 2.0)
ASYM_G = (1.0, 1.0, 2.0)


def energies(levels):
    return [lv.energy for lv in levels]


def test_scan_finds_hole_roots():
    spec = make_spec(3, 1, 3, 0.0)
    f = lambda r: zero_energy_hole_residual(spec, r)  # noqa: E731
    brs = scan_brackets(f, 0.01, 5.0, 1e-3)
    roots = [refine(f, br, 1e-12, 0).refined ** 2 for br in brs[:4]]
    assert np.allclose(roots, [0.4267, 3.3730, 10.8393, 23.1923], atol=1e-3)


def test_scan_no_sign_change():
    assert scan_brackets(lambda x: x * x + 1, 0.0, 1.0, 1e-3) == []


def test_scan_never_evaluates_inside_exclusion_windows():
    def f(x):
        assert abs(x - 0.5) >= 0.05
        return x - 0.5

    # the neighbours of the window still bracket a genuine sign change
    brs = scan_brackets(f, 0.0, 1.0, 1e-2, exclude=[(0.5, 0.05)])
    assert len(brs) == 1 and brs[0][0] <= 0.45 + 1e-12 and brs[0][1] >= 0.55 - 1e-12


def test_scan_vectorized_matches_scalar():
    f = np.sin
    a = scan_brackets(f, 0.1, 20.0, 1e-2)
    b = scan_brackets(f, 0.1, 20.0, 1e-2, vectorized=True)
    assert a == b and len(a) == 6


def test_scan_brackets_the_close_doublet():
    from rectwell.conditions import regular_determinant

    spec = make_spec(3, 1, 3, 10.0)
    brs = scan_brackets(lambda e: regular_determinant(spec, e), 1e-3, 10.0, 1e-3, vectorized=True)
    mids = [0.5 * (lo + hi) for lo, hi in brs]
    assert any(abs(m - 1.8201) < 1e-3 for m in mids)
    assert any(abs(m - 1.8260) < 1e-3 for m in mids)


def test_refine_pi():
    r = refine(math.sin, (3.0, 3.3), 1e-12, 0.0)
    assert abs(r.refined - math.pi) < 1e-12
    assert r.lo <= r.refined <= r.hi
    assert r.hi - r.lo <= 2 * 1e-12 or abs(r.residual_at_refined) == 0


def test_refine_requires_sign_change():
    with pytest.raises(ValueError):
        refine(lambda x: x * x + 1, (0.0, 1.0), 1e-12, 0)


def test_refine_no_convergence():
    with pytest.raises(NoConvergence):
        # a jump defeats interpolation, leaving bisection
        refine(lambda x: 1.0 if x > 0.3 else -1.0, (0.0, 1.0), 1e-15, 0, maxiter=3)


@settings(max_examples=200, deadline=None)
@given(root=st.floats(-5, 5), scale=st.floats(0.1, 10))
def test_refine_keeps_a_bracket(root, scale):
    f = lambda x: math.atan(scale * (x - root)) + 0.1 * (x - root) ** 3  # noqa: E731
    r = refine(f, (-6.0, 6.0), 1e-10, 0)
    assert abs(r.refined - root) < 1e-9
    assert r.hi - r.lo <= 2e-10 + 1e-15 or r.residual_at_refined == 0


def test_special_depths():
    sym = find_special_depths(SYM_G, 4)
    asym = find_special_depths(ASYM_G, 4)
    assert np.allclose([r.v0 for r in sym], [-0.4267, -3.3730, -10.8393, -23.1923], atol=1e-3)
    assert np.allclose([r.v0 for r in asym], [-0.5695, -3.7466, -11.2902, -23.6678], atol=1e-3)
    assert [r.order for r in sym] == [0, 1, 2, 3]
    assert all(r.kind is SpecialKind.HOLE_ZERO_ENERGY and r.v0 < 0 for r in sym + asym)


def test_special_depth_ground_state():
    (root,) = find_special_depths(SYM_G, 1)
    assert root.order == 0 and abs(root.v0 + 0.4267) < 1e-3


def test_special_heights():
    sym = find_special_heights(SYM_G, 4)
    asym = find_special_heights(ASYM_G, 4)
    assert np.allclose([r.v0 for r in sym], [0.6168, 1.3098, 5.5516, 6.4693], atol=1e-3)
    assert np.allclose([r.v0 for r in asym], [0.8753, 3.2699, 6.1213, 15.8550], atol=1e-3)
    assert all(r.kind is SpecialKind.BARRIER_TOP and r.v0 > 0 for r in sym + asym)


def test_special_counts_validated():
    with pytest.raises(ValueError):
        find_special_depths(SYM_G, 0)
    with pytest.raises(ValueError):
        find_special_heights(SYM_G, 0)


def test_special_order_is_the_level_index():
    for root in find_special_heights(ASYM_G, 4) + find_special_depths(ASYM_G, 4):
        spec = make_spec(2, 1, 3, root.v0)
        levels = find_spectrum(spec, 6)
        special = [lv for lv in levels if lv.kind is not LevelKind.GENERIC]
        assert len(special) == 1 and special[0].n == root.order


@pytest.mark.parametrize(
    "spec, want",
    [
        ((3, 1, 3, 0.0), [0.2741, 1.0966, 2.4674, 4.3864, 6.8538, 9.8696]),
        ((3, 1, 3, -3.3730), [-2.3768, 0, 1.7942, 3.1867, 5.8598, 8.9105]),
        ((3, 1, 3, 5.5516), [1.6280, 1.6639, 5.5516, 6.2605, 8.7725, 12.2097]),
        ((2, 1, 3, 10.0), [1.8230, 5.3753, 7.0049, 11.8832, 14.9494, 18.6187]),
    ],
)
def test_spectrum_examples(spec, want):
    got = energies(find_spectrum(make_spec(*spec), 6))
    assert np.allclose(got, want, atol=2e-4)


def test_special_level_tagging():
    levels = find_spectrum(make_spec(3, 1, 3, -3.3730), 6)
    assert levels[1].kind is LevelKind.ZERO_ENERGY and levels[1].energy == 0.0
    levels = find_spectrum(make_spec(3, 1, 3, 5.5516), 6)
    assert levels[2].kind is LevelKind.BARRIER_TOP
    assert [lv.kind for lv in levels].count(LevelKind.GENERIC) == 5


def test_no_tag_without_snapping_at_rounded_value():
    levels = find_spectrum(make_spec(3, 1, 3, -3.3730), 6, critical_window=0)
    assert all(lv.kind is LevelKind.GENERIC for lv in levels)
    # the level sits within the rounding of v0 from zero
    assert abs(levels[1].energy) < 1e-3


def test_zero_energy_tag_iff_small_residual():
    for v0 in (-0.4267, -0.5, -3.0, -3.3730, -10.8393):
        eff, kind = resolve_spec(make_spec(3, 1, 3, v0))
        _, res = special_residual(eff)
        assert (kind is LevelKind.ZERO_ENERGY) == (abs(res) < SPECIAL_TOL)


def test_never_both_special_kinds():
    for v0 in (-23.1923, -0.4267, 0.6168, 6.4693, 0.0):
        kinds = {lv.kind for lv in find_spectrum(make_spec(3, 1, 3, v0), 6)}
        assert not {LevelKind.ZERO_ENERGY, LevelKind.BARRIER_TOP} <= kinds


def test_box_spectrum():
    for a, c in ((3, 3), (2, 3)):
        got = energies(find_spectrum(make_spec(a, 1, c, 0.0), 6))
        want = [n * n * math.pi**2 / (a + c) ** 2 for n in range(1, 7)]
        assert np.allclose(got, want, atol=1e-8, rtol=0)


@settings(max_examples=25, deadline=None)
@given(v0=st.floats(-30, 30), b=st.floats(0.2, 2.0), d1=st.floats(0.3, 3.0), d2=st.floats(0.3, 3.0))
def test_spectrum_is_strictly_increasing_and_stable(v0, b, d1, d2):
    spec = make_spec(b + d1, b, b + d2, v0)
    short = energies(find_spectrum(spec, 3, with_nodes=False))
    long = energies(find_spectrum(spec, 6, with_nodes=False))
    assert all(x < y for x, y in zip(long, long[1:]))
    assert np.allclose(short, long[:3], atol=TOL_X, rtol=0)


def test_perturbation_pushes_levels():
    base = energies(find_spectrum(make_spec(3, 1, 3, -0.4267), 6))
    deeper = energies(find_spectrum(make_spec(3, 1, 3, -0.5), 6))
    assert all(x < y for x, y in zip(deeper, base))
    base = energies(find_spectrum(make_spec(3, 1, 3, 0.6168), 6))
    higher = energies(find_spectrum(make_spec(3, 1, 3, 0.7), 6))
    assert all(x > y for x, y in zip(higher, base))


def test_levels_have_nodes_and_indices():
    levels = find_spectrum(make_spec(2, 1, 3, -23.6678), 6)
    assert [lv.n for lv in levels] == list(range(6))
    assert [lv.nodes for lv in levels] == list(range(6))


def test_spectrum_incomplete():
    with pytest.raises(SpectrumIncomplete):
        find_spectrum(make_spec(3, 1, 3, 0.0), 6, step=50.0)


def test_spectrum_rejects_bad_count():
    with pytest.raises(ValueError):
        find_spectrum(make_spec(3, 1, 3, 0.0), 0)
