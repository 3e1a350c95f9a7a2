"""Numerov shooting, used to check the closed-form results independently.

Nothing here uses the matching conditions: the potential is integrated
region by region on grids pinned to ``x = +-b``, from each wall to ``x = 0``,
and eigenvalues are zeros of the Wronskian mismatch there.  E=0 and E=v0 get
no special treatment.

Inside a region ``V`` is constant, so the Numerov recurrence
``y[k+1] = tau*y[k] - y[k-1]`` has a constant coefficient and is solved in
closed form by Chebyshev polynomials, which makes a scan
over thousands of energies cheap.  :func:`march` runs the same recurrence
step by step and is kept as the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpectrumIncomplete
from .potential import PotentialSpec
from .rootfind import SCAN_STEP, scan_brackets, spectrum_ceiling

RESCALE_AT = 1e100


@dataclass(frozen=True)
class ShootingResult:
    energy: float
    mismatch: float
    grid_step: float


def region_grid(width: float, h: float) -> tuple[int, float]:
    """Number of steps and the adjusted step that fits ``width`` exactly."""
    n = max(2, int(math.ceil(width / h - 1e-9)))
    return n, width / n


def _tau_minus_2(t):
    # tau - 2 in y[k+1] = tau y[k] - y[k-1], with t = f h^2
    return t / (1 - t / 12)


def _first_difference(psi0, dpsi0, t, h):
    # y[1] - y[0] from the series of psi'' = f psi with constant f, error O(h^6)
    return psi0 * (t / 2 + t * t / 24) + dpsi0 * h * (1 + t / 6 + t * t / 120)


def _slope(y, delta, t, h):
    # (y[n+1] - y[n-1]) / 2h corrected for psi''' = f psi' and psi^(5) = f^2 psi'
    return (2 * delta + _tau_minus_2(t) * y) / (2 * h * (1 + t / 6 + t * t / 120))


def _chebyshev(tm2: np.ndarray, n: int):
    """``U_{n-1}, U_{n-2}`` and ``W_n = U_{n-1} - U_{n-2}`` at ``tau/2``.

    In the tunnelling case all three are divided by ``exp(n theta)`` so
    nothing overflows.  The half-angle comes from ``tau - 2`` directly, which
    stays accurate as ``tau -> 2``.
    """
    tm2 = np.asarray(tm2, float)
    osc = tm2 < 0
    half = np.where(
        osc,
        np.arcsin(np.sqrt(np.clip(-tm2 / 4, 0, 1))),
        np.arcsinh(np.sqrt(np.clip(tm2 / 4, 0, None))),
    )
    tiny = half * n < 1e-10
    hh = np.where(tiny, 1.0, half)
    th = 2 * hh
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        u1_trig = np.sin(n * th) / np.sin(th)
        u2_trig = np.sin((n - 1) * th) / np.sin(th)
        w_trig = np.cos((2 * n - 1) * hh) / np.cos(hh)
        two_sinh = -np.expm1(-2 * th) * np.exp(th)
        u1_hyp = -np.expm1(-2 * n * th) / two_sinh
        u2_hyp = -np.expm1(-2 * (n - 1) * th) * np.exp(-th) / two_sinh
        w_hyp = (np.exp(-hh) + np.exp(-(4 * n - 1) * hh)) / (2 * np.cosh(hh))
    u1 = np.where(tiny, float(n), np.where(osc, u1_trig, u1_hyp))
    u2 = np.where(tiny, n - 1.0, np.where(osc, u2_trig, u2_hyp))
    w = np.where(tiny, 1.0, np.where(osc, w_trig, w_hyp))
    return u1, u2, w


def propagate(psi0, dpsi0, f, width: float, h: float):
    """Carry ``(psi, psi')`` across a constant-``f`` region of ``width``.

    Uses the exact solution of the Numerov recurrence in difference form,
    with ``D[k] = y[k] - y[k-1]``::

        y[n] = W_n y[0] + U_{n-1} D[1]
        D[n] = (tau - 2) U_{n-2} y[0] + W_n D[1]

    which avoids the cancellation in ``U_{n-1} y[1] - U_{n-2} y[0]``.  In
    the tunnelling case the result carries a positive factor per energy,
    which leaves the log-derivative and the sign of the mismatch unchanged.
    """
    n, hh = region_grid(width, h)
    psi0, dpsi0, f = np.broadcast_arrays(
        np.asarray(psi0, float), np.asarray(dpsi0, float), np.asarray(f, float)
    )
    t = f * hh * hh
    tm2 = _tau_minus_2(t)
    d1 = _first_difference(psi0, dpsi0, t, hh)
    u1, u2, w = _chebyshev(tm2, n)
    yn = w * psi0 + u1 * d1
    dn = tm2 * u2 * psi0 + w * d1
    return yn, _slope(yn, dn, t, hh)


def march(psi0: float, dpsi0: float, f: float, width: float, h: float) -> tuple[float, float]:
    """Step-by-step version of :func:`propagate` for scalars, rescaling large amplitudes."""
    n, hh = region_grid(width, h)
    t = f * hh * hh
    tm2 = float(_tau_minus_2(t))
    delta = float(_first_difference(psi0, dpsi0, t, hh))
    y = psi0 + delta
    for _ in range(n - 1):
        delta += tm2 * y
        y += delta
        if abs(y) > RESCALE_AT:
            y /= RESCALE_AT
            delta /= RESCALE_AT
    return y, float(_slope(y, delta, t, hh))


def _side(spec: PotentialSpec, e, outer_width: float, h: float, stepper):
    e = np.asarray(e, float)
    psi, dpsi = stepper(np.zeros_like(e), np.ones_like(e), -e, outer_width, h)
    return stepper(psi, dpsi, spec.v0 - e, spec.b, h)


def numerov_mismatch(spec: PotentialSpec, e, h: float = 1e-3, *, stepwise: bool = False):
    """Normalized Wronskian ``psi_L psi_R' - psi_R psi_L'`` at ``x = 0``.

    Left solution starts at ``x=-a`` with ``psi=0, psi'=1``; right solution at
    ``x=c`` with ``psi=0, psi'=-1``.  Each side is divided by the length of
    its ``(psi, psi')`` vector, so the result lies in ``[-1, 1]``.
    Vectorized over ``e`` unless ``stepwise`` is set.
    """
    if stepwise:
        def stepper(p, dp, f, w, hh):
            res = [march(float(a), float(b), float(c), w, hh) for a, b, c in
                   zip(np.atleast_1d(p), np.atleast_1d(dp), np.atleast_1d(f))]
            out = np.array(res).T
            return out[0].reshape(np.shape(p)), out[1].reshape(np.shape(p))
    else:
        stepper = propagate
    psi_l, dpsi_l = _side(spec, e, spec.d1, h, stepper)
    # right side runs in x' = -x, so d/dx = -d/dx'
    psi_r, dpsi_r = _side(spec, e, spec.d2, h, stepper)
    dpsi_r = -dpsi_r
    w = psi_l * dpsi_r - psi_r * dpsi_l
    w = w / (np.hypot(psi_l, dpsi_l) * np.hypot(psi_r, dpsi_r))
    return w if np.ndim(w) else float(w)


def shoot(spec: PotentialSpec, e: float, h: float = 1e-3) -> ShootingResult:
    return ShootingResult(float(e), numerov_mismatch(spec, float(e), h), h)


def _bisect_all(f, lo: np.ndarray, hi: np.ndarray, tol: float = 1e-13, maxiter: int = 200):
    flo = f(lo)
    for _ in range(maxiter):
        if np.all(hi - lo <= tol * np.maximum(1.0, np.abs(lo))):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def numerov_spectrum(
    spec: PotentialSpec, n_levels: int, h: float = 1e-3, step: float = SCAN_STEP
) -> list[float]:
    """Lowest ``n_levels`` eigenvalues from sign changes of the mismatch.

    Scans the same range as the analytic solver, but with no exclusion
    windows, and bisects all brackets together.

    Raises:
        SpectrumIncomplete: if too few levels lie below twice the ceiling.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")

    def f(e):
        return numerov_mismatch(spec, e, h)

    e_lo = min(0.0, spec.v0) + 1e-9
    e_max = spectrum_ceiling(spec, n_levels)
    for _attempt in range(2):
        brackets = scan_brackets(f, e_lo, e_max, step, vectorized=True)
        if len(brackets) >= n_levels:
            break
        e_max *= 2.0
    else:
        raise SpectrumIncomplete(f"oracle found {len(brackets)} of {n_levels} levels for {spec}")
    brackets = brackets[:n_levels]
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    return [float(x) for x in _bisect_all(f, lo, hi)]
