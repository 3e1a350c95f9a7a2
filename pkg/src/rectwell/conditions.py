"""Quantization conditions as residual functions.

Two families live here:

* the closed-form special-energy conditions (zero energy over a barrier or a
  hole, barrier-top energy) and the generic sub-barrier condition in its
  published trigonometric/hyperbolic form;
* the 4x4 matching determinant, assembled either with the literal region
  bases (``matching_determinant``) or with the *regular* bases
  ``S(t) = sin(kt)/k``, ``C(t) = cos(kt)`` that stay finite and nonzero as a
  wavenumber goes to zero (``regular_determinant``).  The regular form is an
  analytic function of E with no spurious zeros at E=0 or E=v0, which is what
  the spectrum scan uses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, WindowError
from .potential import Basis, BasisKind, PotentialSpec

#: Half-width of the exclusion windows around E=0 and E=v0.
WINDOW_EPS = 1e-6


class Regime(enum.Enum):
    BELOW_ZERO = "below-zero"
    ZERO_WINDOW = "zero-window"
    MID = "mid"
    BARRIER_TOP_WINDOW = "barrier-top-window"
    ABOVE_BARRIER = "above-barrier"


@dataclass(frozen=True)
class Residual:
    value: float
    regime: Regime


def classify_energy(spec: PotentialSpec, e: float, eps: float = WINDOW_EPS) -> Regime:
    if abs(e) < eps:
        return Regime.ZERO_WINDOW
    if abs(e - spec.v0) < eps:
        return Regime.BARRIER_TOP_WINDOW
    if e < 0:
        return Regime.BELOW_ZERO
    if e < spec.v0:
        return Regime.MID
    return Regime.ABOVE_BARRIER


# --- special-energy conditions -------------------------------------------------


def zero_energy_barrier_residual(spec: PotentialSpec, q: float) -> float:
    """E=0 condition over a barrier of height q**2; positive for every q > 0."""
    d1, d2, b = spec.d1, spec.d2, spec.b
    return (d1 + d2) * q * math.cosh(2 * q * b) + (1 + d1 * d2 * q * q) * math.sinh(2 * q * b)


def zero_energy_hole_residual(spec: PotentialSpec, r: float) -> float:
    """E=0 condition for a hole of depth r**2 (the barrier condition at q = i r)."""
    d1, d2, b = spec.d1, spec.d2, spec.b
    return (d1 + d2) * r * math.cos(2 * b * r) + (1 - d1 * d2 * r * r) * math.sin(2 * b * r)


def barrier_top_residual(spec: PotentialSpec, s: float) -> float:
    """E=v0 condition for a barrier of height s**2."""
    d1, d2, b = spec.d1, spec.d2, spec.b
    return 2 * b * s * s * math.cos(s * d1) * math.cos(s * d2) + s * math.sin(s * (d1 + d2))


def delta_zero_energy_strength(a: float, c: float) -> float:
    """Strength ``g`` of ``g*delta(x)`` between walls at -a and c giving an E=0 state.

    The two linear pieces ``A(x+a)`` and ``B(x-c)`` must join continuously at
    0 with derivative jump ``g*psi(0)``, which fixes ``g*a = -(1 + a/c)``.
    """
    if a <= 0 or c <= 0:
        raise DomainError(f"wall distances must be positive, got a={a}, c={c}")
    return -(1.0 + a / c) / a


# --- generic condition in closed form -----------------------------------------


def _regular_pair(lam, t):
    """Regular solutions of ``f'' = -lam f`` at ``t``: ``S`` (S(0)=0, S'(0)=1) and ``C``.

    Both are returned divided by ``cosh(sqrt(-lam)|t|)`` when ``lam < 0`` so that
    deep tunnelling regimes cannot overflow; the common positive factor is
    also returned.
    """
    lam = np.asarray(lam, dtype=float)
    t = np.asarray(t, dtype=float)
    x = lam * t * t
    small = np.abs(x) < 1e-8
    root = np.sqrt(np.abs(lam))
    safe = np.where(root == 0, 1.0, root)
    pos = lam > 0
    with np.errstate(over="ignore", invalid="ignore"):
        s_trig = np.sin(root * t) / safe
        c_trig = np.cos(root * t)
        ch = np.cosh(root * np.abs(t))
        # sinh/cosh and cosh/cosh, computed without forming the large values
        s_hyp = np.tanh(root * np.abs(t)) * np.sign(t) / safe
        c_hyp = np.ones_like(x)
    s_ser = t * (1 - x / 6)
    c_ser = 1 - x / 2
    S = np.where(small, s_ser, np.where(pos, s_trig, s_hyp))
    C = np.where(small, c_ser, np.where(pos, c_trig, c_hyp))
    scale = np.where(small | pos, 1.0, ch)
    return S, C, scale


def _cosh_ratio(kappa, x, y):
    """cosh(kx) cosh(ky) / cosh(k(x+y)) without overflow."""
    ex, ey = np.exp(-2 * kappa * x), np.exp(-2 * kappa * y)
    return (1 + ex) * (1 + ey) / (2 * (1 + ex * ey))


def unified_condition(spec: PotentialSpec, e, scaled: bool = True):
    """Regime-independent form of the generic eigenvalue condition.

    With ``S_o, C_o`` the regular outer solutions (``lam = E``) and ``s, c``
    the inner ones at ``t=b`` (``lam = E - v0``)::

        G(E) = (c^2 + (v0-E) s^2) S_o(d) + 2 s c (C_o(d) + v0 S_o(d1) S_o(d2))

    ``G`` is analytic in E.  At E=0 it is the zero-energy condition divided by
    q (or r); at E=v0 it is the barrier-top condition divided by s^2.  With
    ``scaled=True`` the result is divided by the positive factor
    ``cosh(p b)^2 cosh(kappa d)`` for each hyperbolic part.
    """
    e = np.asarray(e, dtype=float)
    mu = spec.v0 - e
    s, c, sc_in = _regular_pair(-mu, spec.b)
    so_d, co_d, sc_d = _regular_pair(e, spec.d)
    so_1, _, sc_1 = _regular_pair(e, spec.d1)
    so_2, _, sc_2 = _regular_pair(e, spec.d2)
    kappa = np.sqrt(np.clip(-e, 0.0, None))
    ratio = np.where(sc_d == 1.0, 1.0, _cosh_ratio(kappa, spec.d1, spec.d2))
    g = (c * c + mu * s * s) * so_d + 2 * s * c * (co_d + spec.v0 * so_1 * so_2 * ratio)
    if not scaled:
        g = g * sc_in * sc_in * sc_d
    return g if np.ndim(g) else float(g)


def eq19_residual(spec: PotentialSpec, e: float) -> float:
    """Generic condition ``+-sqrt(E(V0-E)) cosh(2pb) sin(kd) + [...] sinh(2pb)``.

    For ``0 < E < v0`` the expression is evaluated literally.  Elsewhere k
    and/or p are imaginary; the returned real form is ``|E| |p| G(E)`` with
    ``G`` from :func:`unified_condition` (unscaled), which equals the literal
    expression on ``(0, v0)`` and changes sign exactly where it does.

    Raises:
        DomainError: inside the windows around E=0 and E=v0, where the
            expression vanishes without an eigenvalue being present.
    """
    v0 = spec.v0
    if abs(e) < WINDOW_EPS or abs(e - v0) < WINDOW_EPS:
        raise DomainError(f"E={e} is inside a spurious-root window (v0={v0})")
    d1, d2, d, b = spec.d1, spec.d2, spec.d, spec.b
    if 0 < e < v0:
        k = math.sqrt(e)
        p = math.sqrt(v0 - e)
        return (
            math.sqrt(e * (v0 - e)) * math.cosh(2 * p * b) * math.sin(k * d)
            + (e * math.cos(k * d) + v0 * math.sin(k * d1) * math.sin(k * d2))
            * math.sinh(2 * p * b)
        )
    g = unified_condition(spec, e, scaled=False)
    return abs(e) * math.sqrt(abs(v0 - e)) * g


# --- matching determinant -----------------------------------------------------


def region_bases(spec: PotentialSpec, e: float) -> tuple[Basis, Basis]:
    """(outer, inner) literal bases for energy ``e``."""
    return Basis.for_local_energy(e), Basis.for_local_energy(e - spec.v0)


def matching_system(spec: PotentialSpec, outer: Basis, inner: Basis) -> np.ndarray:
    """Rows ``x_i B + y_i C + z_i D = w_i A`` as a 4x4 array with columns (x, y, z, w).

    The wavefunction is ``A f1(x+a)`` on the left, ``B f1(x) + C f2(x)`` inside
    and ``D f1(x-c)`` on the right, one row per matching condition (value and
    slope at ``-b``, value and slope at ``b``).
    """
    b, d1, d2 = spec.b, spec.d1, spec.d2
    f_m, g_m = inner.functions(-b)
    fp_m, gp_m = inner.functions(-b, 1)
    f_p, g_p = inner.functions(b)
    fp_p, gp_p = inner.functions(b, 1)
    ul, _ = outer.functions(d1)
    ulp, _ = outer.functions(d1, 1)
    ur, _ = outer.functions(-d2)
    urp, _ = outer.functions(-d2, 1)
    return np.array(
        [
            [f_m, g_m, 0.0, ul],
            [fp_m, gp_m, 0.0, ulp],
            [f_p, g_p, -ur, 0.0],
            [fp_p, gp_p, -urp, 0.0],
        ],
        dtype=float,
    )


def matching_determinant(spec: PotentialSpec, e: float) -> Residual:
    """Scaled determinant of the matching system with the literal region bases.

    Outer regions use sin(k.) for E>0 and sinh(kappa.) for E<0; the inner
    region uses (sinh, cosh)(p.) below the barrier top and (sin, cos) above it.
    Hyperbolic columns are scaled by exp(-2pb) and exp(-kappa d1 - kappa d2)
    overall, so signs and zeros are those of the raw determinant.

    Raises:
        WindowError: for ``|e| < eps`` or ``|e - v0| < eps``, where this
            determinant vanishes whether or not an eigenvalue is present.
    """
    regime = classify_energy(spec, e)
    if regime in (Regime.ZERO_WINDOW, Regime.BARRIER_TOP_WINDOW):
        raise WindowError(f"E={e} is within {WINDOW_EPS} of a special energy (v0={spec.v0})")
    outer, inner = region_bases(spec, e)
    return Residual(float(np.linalg.det(_scaled_system(spec, outer, inner))), regime)


def _scaled_system(spec: PotentialSpec, outer: Basis, inner: Basis) -> np.ndarray:
    """``matching_system`` with hyperbolic columns times exp(-pb) or exp(-kappa d_i).

    Hyperbolic entries are formed from ``exp(x - w)`` so large arguments
    cannot overflow.
    """

    def e_sinh(x, w):
        return 0.5 * (math.exp(x - w) - math.exp(-x - w))

    def e_cosh(x, w):
        return 0.5 * (math.exp(x - w) + math.exp(-x - w))

    b, d1, d2 = spec.b, spec.d1, spec.d2
    trig_in = inner if inner.kind is not BasisKind.HYP else Basis(BasisKind.LINEAR)
    trig_out = outer if outer.kind is not BasisKind.HYP else Basis(BasisKind.LINEAR)
    m = matching_system(spec, trig_out, trig_in)
    if inner.kind is BasisKind.HYP:
        p = inner.wavenumber
        sh, ch = e_sinh(p * b, p * b), e_cosh(p * b, p * b)
        m[:, 0] = [-sh, p * ch, sh, p * ch]
        m[:, 1] = [ch, -p * sh, ch, p * sh]
    if outer.kind is BasisKind.HYP:
        kap = outer.wavenumber
        m[0, 3] = e_sinh(kap * d1, kap * d1)
        m[1, 3] = kap * e_cosh(kap * d1, kap * d1)
        m[2, 2] = e_sinh(kap * d2, kap * d2)
        m[3, 2] = -kap * e_cosh(kap * d2, kap * d2)
    return m


def regular_matrix(spec: PotentialSpec, e) -> np.ndarray:
    """Matching matrices with regular bases, shape ``(..., 4, 4)``.

    Columns are scaled by positive factors (see :func:`_regular_pair`).
    """
    e = np.asarray(e, dtype=float)
    lam_in = e - spec.v0
    s, c, _ = _regular_pair(lam_in, spec.b)
    sl, cl, _ = _regular_pair(e, spec.d1)
    sr, cr, _ = _regular_pair(e, spec.d2)
    mu = -lam_in
    zero = np.zeros_like(e)
    # columns (B, C, D, A); inner pair (S, C)(x), outer A S(x+a), D S(x-c)
    rows = [
        [-s, c, zero, sl],
        [c, -mu * s, zero, cl],
        [s, c, sr, zero],
        [c, mu * s, -cr, zero],
    ]
    m = np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)
    return m


def regular_determinant(spec: PotentialSpec, e):
    """Determinant of :func:`regular_matrix`; vectorized over ``e``.

    Equals ``G(E)`` from :func:`unified_condition` up to positive scaling.
    Its zeros are exactly the eigenvalues, including E=0 and E=v0 when those
    are eigenvalues.
    """
    det = np.linalg.det(regular_matrix(spec, e))
    return det if np.ndim(det) else float(det)
