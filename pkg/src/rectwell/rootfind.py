"""Root bracketing and refinement for the quantization conditions."""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import conditions
from .conditions import WINDOW_EPS
from .errors import NoConvergence, SpectrumIncomplete
from .potential import (
    EnergyLevel,
    LevelKind,
    PotentialSpec,
    SpecialKind,
    SpecialRoot,
    spec_from_widths,
)

log = logging.getLogger(__name__)

SCAN_STEP = 1e-3
TOL_X = 1e-10
TOL_F = 1e-12
#: Lower cutoff on r or s when scanning the special conditions; both vanish at 0.
WAVENUMBER_MIN = 1e-4
#: |residual| below which E=0 or E=v0 is accepted as an eigenvalue.
SPECIAL_TOL = 1e-6
#: A v0 this close to a critical height/depth is moved onto it.
CRITICAL_WINDOW = 1e-3
MAX_ITER = 200

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class BracketedRoot:
    lo: float
    hi: float
    refined: float
    residual_at_refined: float
    iterations: int


def scan_brackets(
    f: Callable,
    lo: float,
    hi: float,
    step: float,
    exclude: Iterable[tuple[float, float]] = (),
    vectorized: bool = False,
) -> list[tuple[float, float]]:
    """Adjacent grid pairs on ``[lo, hi]`` where ``f`` changes sign.

    ``exclude`` holds ``(center, half_width)`` windows; grid points inside
    them are dropped before pairing.  A grid point where ``f`` is exactly zero
    is returned as the degenerate bracket ``(x, x)``.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got {lo}, {hi}")
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(math.ceil((hi - lo) / step))
    x = lo + step * np.arange(n + 1)
    x[-1] = hi
    keep = np.ones(x.size, dtype=bool)
    for center, half in exclude:
        keep &= np.abs(x - center) >= half
    x = x[keep]
    if vectorized:
        y = np.asarray(f(x), dtype=float)
    else:
        y = np.array([f(float(xi)) for xi in x], dtype=float)
    ok = np.isfinite(y)
    x, y = x[ok], y[ok]
    out: list[tuple[float, float]] = []
    zero = y == 0
    for xi in x[zero]:
        out.append((float(xi), float(xi)))
    sgn = np.sign(y)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    out.extend((float(x[i]), float(x[i + 1])) for i in idx)
    out.sort()
    return out


def refine(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol_x: float = TOL_X,
    tol_f: float = TOL_F,
    maxiter: int = MAX_ITER,
) -> BracketedRoot:
    """Brent's method (bisection + secant + inverse quadratic interpolation).

    Stops when the sign-change bracket is narrower than ``2*tol_x`` or when
    ``|f| <= tol_f``; the returned ``lo``/``hi`` are the final bracket.

    Raises:
        ValueError: if ``f`` does not change sign over ``bracket``.
        NoConvergence: after ``maxiter`` iterations.
    """
    a, b = map(float, bracket)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return BracketedRoot(a, a, a, 0.0, 0)
    if fb == 0.0:
        return BracketedRoot(b, b, b, 0.0, 0)
    if fa * fb > 0:
        raise ValueError(f"no sign change on [{a}, {b}]: f={fa}, {fb}")
    c, fc = a, fa
    d = e = b - a
    for it in range(1, maxiter + 1):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol_x
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0 or abs(fb) <= tol_f:
            lo, hi = sorted((b, c))
            return BracketedRoot(lo, hi, b, fb, it)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = float(f(b))
    raise NoConvergence(f"Brent did not converge in {maxiter} iterations on {bracket}")


def _geometry_spec(geometry: Sequence[float]) -> PotentialSpec:
    b, d1, d2 = geometry
    return spec_from_widths(b, d1, d2, 0.0)


def _first_roots(
    f: Callable[[float], float], count: int, start: float, chunk: float, step: float
) -> list[float]:
    roots: list[float] = []
    lo = start
    while len(roots) < count:
        hi = lo + chunk
        for br in scan_brackets(f, lo, hi, step):
            roots.append(refine(f, br, tol_x=1e-13, tol_f=0.0).refined)
        lo = hi
        if lo > 1e4:
            raise NoConvergence(f"found only {len(roots)} of {count} roots below {lo}")
    return sorted(roots)[:count]


def find_special_depths(
    geometry: Sequence[float], count: int, step: float = SCAN_STEP
) -> list[SpecialRoot]:
    """Hole depths at which E=0 is an eigenvalue, shallowest first.

    ``geometry`` is ``(b, d1, d2)``.  Root ``n`` of the zero-energy hole
    condition gives ``v0 = -r_n**2``, where E=0 is level ``n``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    spec = _geometry_spec(geometry)

    def f(r: float) -> float:
        return conditions.zero_energy_hole_residual(spec, r)

    chunk = 2.0 * math.pi / (spec.d + 2 * spec.b)
    rs = _first_roots(f, count, WAVENUMBER_MIN, chunk, step)
    return [SpecialRoot(n, -r * r, SpecialKind.HOLE_ZERO_ENERGY, r) for n, r in enumerate(rs)]


def find_special_heights(
    geometry: Sequence[float], count: int, step: float = SCAN_STEP
) -> list[SpecialRoot]:
    """Barrier heights at which E=v0 is an eigenvalue, lowest first."""
    if count < 1:
        raise ValueError("count must be >= 1")
    spec = _geometry_spec(geometry)

    def f(s: float) -> float:
        return conditions.barrier_top_residual(spec, s)

    chunk = 2.0 * math.pi / spec.d
    ss = _first_roots(f, count, WAVENUMBER_MIN, chunk, step)
    return [SpecialRoot(n, s * s, SpecialKind.BARRIER_TOP, s) for n, s in enumerate(ss)]


def special_residual(spec: PotentialSpec) -> tuple[LevelKind | None, float]:
    """Residual of the special-energy condition that applies to ``spec.v0``.

    Returns ``(None, inf)`` when neither E=0 nor E=v0 can be an eigenvalue:
    the empty box, or a barrier's zero-energy condition (never satisfied).
    """
    if spec.v0 < 0:
        return LevelKind.ZERO_ENERGY, conditions.zero_energy_hole_residual(spec, math.sqrt(-spec.v0))
    if spec.v0 > 0:
        return LevelKind.BARRIER_TOP, conditions.barrier_top_residual(spec, math.sqrt(spec.v0))
    return None, math.inf


def resolve_spec(
    spec: PotentialSpec, window: float = CRITICAL_WINDOW
) -> tuple[PotentialSpec, LevelKind | None]:
    """Snap ``spec.v0`` onto a nearby critical value.

    If a critical depth (hole) or height (barrier) lies within ``window`` of
    ``spec.v0``, return the spec at that refined value together with the kind
    of special level it carries.  Tabulated critical values are rounded, so
    the special state only exists after this refinement.  ``window=0``
    disables snapping; the residual test at the given ``v0`` still applies,
    and is also the fallback when no critical value is found in the window.
    """
    kind, res = special_residual(spec)
    if kind is None:
        return spec, None
    fallback = (spec, kind) if abs(res) < SPECIAL_TOL else (spec, None)
    if window <= 0:
        return fallback
    v0 = spec.v0

    if kind is LevelKind.ZERO_ENERGY:
        def f(w: float) -> float:
            return conditions.zero_energy_hole_residual(spec, w)
    else:
        def f(w: float) -> float:
            return conditions.barrier_top_residual(spec, w)

    lo_v, hi_v = sorted((abs(v0) - window, abs(v0) + window))
    lo_w = math.sqrt(max(lo_v, WAVENUMBER_MIN**2))
    hi_w = math.sqrt(hi_v)
    brackets = scan_brackets(f, lo_w, hi_w, (hi_w - lo_w) / 16)
    if not brackets:
        return fallback
    w = min(
        (refine(f, br, tol_x=1e-14, tol_f=0.0).refined for br in brackets),
        key=lambda w: abs(w * w - abs(v0)),
    )
    v_crit = math.copysign(w * w, v0)
    snapped = spec.with_v0(v_crit)
    kind2, res2 = special_residual(snapped)
    if abs(res2) >= SPECIAL_TOL:
        return fallback
    if v_crit != v0:
        log.debug("snapped v0=%r to critical %r", v0, v_crit)
    return snapped, kind2


def spectrum_ceiling(spec: PotentialSpec, n_levels: int) -> float:
    return max(spec.v0, 0.0) + (n_levels + 2) ** 2 * math.pi**2 / spec.width**2


def find_spectrum(
    spec: PotentialSpec,
    n_levels: int,
    *,
    tol_x: float = TOL_X,
    tol_f: float = TOL_F,
    step: float = SCAN_STEP,
    critical_window: float = CRITICAL_WINDOW,
    with_nodes: bool = True,
) -> list[EnergyLevel]:
    """Lowest ``n_levels`` eigenvalues, special levels included and tagged.

    Generic levels are sign changes of the regular matching determinant on
    ``(min(0, v0), E_max)``; E=0 and E=v0 are decided by their own closed-form
    conditions after :func:`resolve_spec`.  Node counts come from the
    reconstructed wavefunctions when ``with_nodes`` is set.

    Raises:
        SpectrumIncomplete: if fewer than ``n_levels`` levels lie below twice
            the initial ceiling.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    eff, special = resolve_spec(spec, critical_window)
    special_e = None
    if special is LevelKind.ZERO_ENERGY:
        special_e = 0.0
    elif special is LevelKind.BARRIER_TOP:
        special_e = eff.v0

    def det(e):
        return conditions.regular_determinant(eff, e)

    e_lo = min(0.0, eff.v0) + 1e-9
    e_max = spectrum_ceiling(eff, n_levels)
    exclude = [(0.0, WINDOW_EPS), (eff.v0, WINDOW_EPS)]
    for _attempt in range(2):
        found: list[tuple[float, LevelKind]] = []
        for br in scan_brackets(det, e_lo, e_max, step, exclude, vectorized=True):
            root = refine(det, br, tol_x=tol_x, tol_f=tol_f).refined
            if special_e is not None and abs(root - special_e) < WINDOW_EPS:
                continue
            found.append((root, LevelKind.GENERIC))
        if special_e is not None:
            found.append((special_e, special))
        found.sort()
        if len(found) >= n_levels:
            break
        e_max *= 2.0
    else:
        raise SpectrumIncomplete(
            f"found {len(found)} of {n_levels} levels below E={e_max / 2:g} for {spec}"
        )
    levels = [EnergyLevel(n, e, kind) for n, (e, kind) in enumerate(found[:n_levels])]
    if with_nodes:
        from .wavefunction import build_wavefunction, count_nodes

        levels = [
            EnergyLevel(lv.n, lv.energy, lv.kind, count_nodes(build_wavefunction(eff, lv, critical_window=0)))
            for lv in levels
        ]
    return levels
