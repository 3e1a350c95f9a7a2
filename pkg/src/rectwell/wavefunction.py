"""Piecewise eigenfunctions: coefficients, normalization, nodes, overlaps."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .conditions import matching_system
from .errors import InconsistentSystem, OutOfDomain, SpecMismatch
from .potential import (
    Basis,
    BasisKind,
    EnergyLevel,
    LevelKind,
    PotentialSpec,
    RegionSolution,
)
from .rootfind import CRITICAL_WINDOW, resolve_spec

#: Panels per region for composite Simpson quadrature.
SIMPSON_PANELS = 4096
CONSISTENCY_TOL = 1e-8
NODE_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class Wavefunction:
    spec: PotentialSpec
    level: EnergyLevel
    regions: tuple[RegionSolution, ...]
    norm_constant: float

    def region_at(self, x: float) -> RegionSolution:
        if x < self.regions[1].lo:
            return self.regions[0]
        if x > self.regions[1].hi:
            return self.regions[2]
        return self.regions[1]

    def derivative(self, x, order: int = 0):
        """Normalized ``d^order psi / dx^order`` at ``x`` (scalar or array)."""
        xs = np.asarray(x, dtype=float)
        lo, hi = -self.spec.a, self.spec.c
        if np.any(xs < lo) or np.any(xs > hi):
            raise OutOfDomain(f"x outside [{lo}, {hi}]")
        left, mid, right = self.regions
        out = np.where(
            xs < mid.lo,
            left.derivative(xs, order),
            np.where(xs > mid.hi, right.derivative(xs, order), mid.derivative(xs, order)),
        )
        out = self.norm_constant * out
        return out if out.ndim else float(out)

    def __call__(self, x):
        return self.derivative(x, 0)


def level_bases(spec: PotentialSpec, level: EnergyLevel) -> tuple[Basis, Basis]:
    """(outer, inner) bases for ``level``; special kinds force the linear branch."""
    e = level.energy
    if level.kind is LevelKind.ZERO_ENERGY:
        return Basis(BasisKind.LINEAR), Basis.for_local_energy(-spec.v0)
    if level.kind is LevelKind.BARRIER_TOP:
        return Basis.for_local_energy(spec.v0), Basis(BasisKind.LINEAR)
    return Basis.for_local_energy(e), Basis.for_local_energy(e - spec.v0)


def _cramer(m: np.ndarray, rows: tuple[int, int, int]) -> tuple[float, float, float, float]:
    sub = m[list(rows)]
    x, y, z, w = sub.T
    d4 = np.linalg.det(np.column_stack([x, y, z]))
    d1 = np.linalg.det(np.column_stack([w, y, z]))
    d2 = np.linalg.det(np.column_stack([x, w, z]))
    d3 = np.linalg.det(np.column_stack([x, y, w]))
    return d1, d2, d3, d4


def solve_coefficients(
    spec: PotentialSpec, level: EnergyLevel, *, critical_window: float = CRITICAL_WINDOW
) -> tuple[float, float, float, float]:
    """Return ``(A, B, C, D)`` with ``A = 1`` for an eigenvalue of ``spec``.

    ``B, C, D`` follow from Cramer's rule on three of the four matching
    equations; the remaining one must then hold to ``CONSISTENCY_TOL``
    (relative to row norm times solution norm).  The three rows are the well-conditioned triple
    with the largest denominator, so a node sitting exactly on ``x = +-b``
    does not break the solve.

    Raises:
        InconsistentSystem: if the leftover equation fails, i.e. the energy is
            not an eigenvalue of ``spec``.
    """
    spec, _ = resolve_spec(spec, critical_window)
    outer, inner = level_bases(spec, level)
    m = matching_system(spec, outer, inner)
    norms = np.abs(m).sum(axis=1)
    best = None
    for rows in itertools.combinations(range(4), 3):
        d1, d2, d3, d4 = _cramer(m, rows)
        weight = abs(d4) / np.prod(norms[list(rows)])
        if best is None or weight > best[0]:
            best = (weight, rows, d1, d2, d3, d4)
    _, rows, d1, d2, d3, d4 = best
    if d4 == 0:
        raise InconsistentSystem("degenerate matching system")
    B, C, D = d1 / d4, d2 / d4, d3 / d4
    (left_out,) = set(range(4)) - set(rows)
    x, y, z, w = m[left_out]
    scale = (abs(x) + abs(y) + abs(z) + abs(w)) * max(1.0, abs(B), abs(C), abs(D))
    rel = abs(x * B + y * C + z * D - w) / scale
    if rel > CONSISTENCY_TOL:
        raise InconsistentSystem(
            f"E={level.energy!r} is not an eigenvalue of {spec}: "
            f"equation {left_out + 1} off by {rel:.3e}"
        )
    return 1.0, float(B), float(C), float(D)


def _simpson(f, lo: float, hi: float, panels: int = SIMPSON_PANELS) -> float:
    x = np.linspace(lo, hi, panels + 1)
    return float(simpson(f(x), x=x))


def build_wavefunction(
    spec: PotentialSpec, level: EnergyLevel, *, critical_window: float = CRITICAL_WINDOW
) -> Wavefunction:
    """Normalized piecewise eigenfunction for ``level`` (sign: ``psi'(-a) > 0``)."""
    spec, _ = resolve_spec(spec, critical_window)
    A, B, C, D = solve_coefficients(spec, level, critical_window=0)
    outer, inner = level_bases(spec, level)
    regions = (
        RegionSolution(-spec.a, -spec.b, outer, A, 0.0, anchor=-spec.a),
        RegionSolution(-spec.b, spec.b, inner, B, C, anchor=0.0),
        RegionSolution(spec.b, spec.c, outer, D, 0.0, anchor=spec.c),
    )
    total = sum(_simpson(lambda x, r=r: r(x) ** 2, r.lo, r.hi) for r in regions)
    norm = 1.0 / math.sqrt(total)
    # psi'(-a) = A * (k, kappa or 1) with A = 1 > 0, so no sign flip is needed
    return Wavefunction(spec, level, regions, norm)


def evaluate(wf: Wavefunction, x):
    return wf(x)


def _region_zeros(r: RegionSolution, tol: float) -> list[float]:
    c1, c2 = r.coeff1, r.coeff2
    u_lo, u_hi = r.lo - r.anchor - tol, r.hi - r.anchor + tol
    kind, k = r.basis.kind, r.basis.wavenumber
    us: list[float] = []
    if kind is BasisKind.LINEAR:
        if c1 != 0:
            us.append(-c2 / c1)
    elif kind is BasisKind.HYP:
        if c1 != 0 and abs(c2 / c1) < 1:
            us.append(math.atanh(-c2 / c1) / k)
    else:
        # c1 sin(ku) + c2 cos(ku) = R sin(ku + alpha)
        alpha = math.atan2(c2, c1)
        m_lo = math.ceil((k * u_lo + alpha) / math.pi)
        m_hi = math.floor((k * u_hi + alpha) / math.pi)
        us.extend((m * math.pi - alpha) / k for m in range(m_lo, m_hi + 1))
    return [u + r.anchor for u in us if u_lo <= u <= u_hi]


def node_positions(wf: Wavefunction, tol: float = NODE_MERGE_TOL) -> list[float]:
    """Interior zeros of ``psi`` in closed form, merged across region joints."""
    lo, hi = -wf.spec.a, wf.spec.c
    zs = sorted(z for r in wf.regions for z in _region_zeros(r, tol))
    merged: list[float] = []
    for z in zs:
        if z <= lo + tol or z >= hi - tol:
            continue
        if merged and z - merged[-1] <= tol:
            continue
        merged.append(z)
    return merged


def count_nodes(wf: Wavefunction) -> int:
    return len(node_positions(wf))


def count_nodes_sampled(wf: Wavefunction, step: float = 1e-4) -> int:
    """Sign changes of ``psi`` on a uniform grid; cross-check for :func:`count_nodes`."""
    n = int(math.ceil(wf.spec.width / step))
    x = np.linspace(-wf.spec.a, wf.spec.c, n + 1)[1:-1]
    s = np.sign(wf(x))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def inner_product(wf1: Wavefunction, wf2: Wavefunction) -> float:
    """Overlap integral over ``[-a, c]`` by composite Simpson in each region."""
    if wf1.spec != wf2.spec:
        raise SpecMismatch(f"{wf1.spec} != {wf2.spec}")
    total = 0.0
    for r1, r2 in zip(wf1.regions, wf2.regions):
        total += _simpson(lambda x: r1(x) * r2(x), r1.lo, r1.hi)
    return total * wf1.norm_constant * wf2.norm_constant


def gram_matrix(wfs) -> np.ndarray:
    wfs = list(wfs)
    n = len(wfs)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = inner_product(wfs[i], wfs[j])
    return g


def local_residual(wf: Wavefunction, x) -> np.ndarray:
    """``psi'' - (V - E) psi`` at ``x``, using analytic second derivatives."""
    x = np.asarray(x, dtype=float)
    v = wf.spec.potential(x)
    # points on x = +-b belong to the inner region for both V and psi
    return wf.derivative(x, 2) - (v - wf.level.energy) * wf(x)


def sample(wf: Wavefunction, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform samples including both walls, where ``psi`` is exactly 0."""
    if n_points < 2:
        raise ValueError("need at least 2 points")
    x = np.linspace(-wf.spec.a, wf.spec.c, n_points)
    return x, np.asarray(wf(x), dtype=float)
