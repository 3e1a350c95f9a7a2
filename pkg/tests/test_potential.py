from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rectwell import Basis, BasisKind, GeometryError, RegionSolution, make_spec, spec_from_widths
from rectwell.potential import LINEAR_TOL

lengths = st.floats(0.01, 50, allow_nan=False)


def test_symmetric_geometry():
    s = make_spec(3, 1, 3, 10)
    assert (s.d1, s.d2, s.d) == (2, 2, 4)
    assert s.symmetric()


def test_asymmetric_geometry():
    s = make_spec(2, 1, 3, -5)
    assert (s.d1, s.d2) == (1, 2)
    assert not s.symmetric()


@pytest.mark.parametrize(
    "args",
    [(1, 1, 3, 0), (3, 1, 1, 0), (3, 0, 3, 0), (3, -1, 3, 0), (math.inf, 1, 3, 0), (3, 1, 3, math.nan)],
)
def test_bad_geometry_rejected(args):
    with pytest.raises(GeometryError):
        make_spec(*args)


def test_geometry_error_is_a_value_error():
    with pytest.raises(ValueError):
        make_spec(1, 1, 3, 0)


@given(b=lengths, d1=lengths, d2=lengths, v0=st.floats(-100, 100))
def test_widths_add_up(b, d1, d2, v0):
    s = make_spec(b + d1, b, b + d2, v0)
    assert math.isclose(s.d1 + s.d2 + 2 * s.b, s.a + s.c, rel_tol=1e-12)


@given(b=lengths, d1=lengths, d2=lengths)
def test_reflection_swaps_outer_widths(b, d1, d2):
    s = spec_from_widths(b, d1, d2, 1.0)
    r = s.reflected()
    assert math.isclose(r.d1, s.d2) and math.isclose(r.d2, s.d1)
    assert math.isclose(r.d, s.d)
    assert r.reflected() == s


def test_potential_profile():
    s = make_spec(3, 1, 3, 10)
    assert s.potential(0.0) == 10 and s.potential(1.0) == 10 and s.potential(-1.0) == 10
    assert s.potential(2.0) == 0 and s.potential(-2.5) == 0
    assert np.array_equal(s.potential(np.array([-2, 0, 2])), [0, 10, 0])


def test_spec_is_immutable():
    s = make_spec(3, 1, 3, 0)
    with pytest.raises(AttributeError):
        s.v0 = 1.0  # type: ignore[misc]


@pytest.mark.parametrize(
    "ev, kind",
    [(1.0, BasisKind.TRIG), (-1.0, BasisKind.HYP), (0.0, BasisKind.LINEAR),
     (0.5 * LINEAR_TOL, BasisKind.LINEAR), (-0.5 * LINEAR_TOL, BasisKind.LINEAR),
     (2 * LINEAR_TOL, BasisKind.TRIG)],
)
def test_basis_classification(ev, kind):
    assert Basis.for_local_energy(ev).kind is kind


@pytest.mark.parametrize("basis", [Basis(BasisKind.TRIG, 1.7), Basis(BasisKind.HYP, 0.8), Basis(BasisKind.LINEAR)])
def test_basis_functions_solve_their_equation(basis):
    u = np.linspace(-2, 2, 41)
    f, g = basis.functions(u, 0)
    f2, g2 = basis.functions(u, 2)
    assert np.allclose(f2, basis.curvature * f) and np.allclose(g2, basis.curvature * g)
    # first derivative against a central difference
    eps = 1e-6
    fp, gp = basis.functions(u + eps, 0)
    fm, gm = basis.functions(u - eps, 0)
    f1, g1 = basis.functions(u, 1)
    assert np.allclose(f1, (fp - fm) / (2 * eps), atol=1e-6)
    assert np.allclose(g1, (gp - gm) / (2 * eps), atol=1e-6)


def test_region_solution_anchor_and_scaling():
    r = RegionSolution(-3, -1, Basis(BasisKind.LINEAR), 2.0, 0.0, anchor=-3)
    assert r(-3) == 0 and r(-1) == 4
    assert r.derivative(-2, 1) == 2
    assert r.scaled(0.5)(-1) == 2
    assert r.contains(-1) and not r.contains(0)
