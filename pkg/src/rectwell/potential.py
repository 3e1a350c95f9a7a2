"""Domain types for a rectangular barrier or well between two rigid walls.

Units are fixed to 2m = hbar^2 = 1, so the Schrodinger equation reads
``psi'' = (V(x) - E) psi`` and every wavenumber is the square root of an
energy difference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

#: |E - V| below this is treated as the linear (zero-curvature) branch.
LINEAR_TOL = 1e-9


@dataclass(frozen=True)
class PotentialSpec:
    """Walls at ``x=-a`` and ``x=c``, inner region ``[-b, b]`` at height ``v0``.

    ``v0 > 0`` is a double well (barrier in the middle), ``v0 < 0`` is a hole.
    Use :func:`make_spec` to construct a validated instance.
    """

    a: float
    b: float
    c: float
    v0: float

    @property
    def d1(self) -> float:
        return self.a - self.b

    @property
    def d2(self) -> float:
        return self.c - self.b

    @property
    def d(self) -> float:
        return self.d1 + self.d2

    @property
    def width(self) -> float:
        return self.a + self.c

    def symmetric(self) -> bool:
        return self.d1 == self.d2

    def with_v0(self, v0: float) -> PotentialSpec:
        return PotentialSpec(self.a, self.b, self.c, float(v0))

    def reflected(self) -> PotentialSpec:
        """Mirror image ``x -> -x`` (swaps the outer widths)."""
        return PotentialSpec(self.c, self.b, self.a, self.v0)

    def potential(self, x):
        """V(x) on the open box; works on scalars and arrays."""
        x = np.asarray(x, dtype=float)
        v = np.where(np.abs(x) <= self.b, self.v0, 0.0)
        return v if v.ndim else float(v)


def make_spec(a: float, b: float, c: float, v0: float) -> PotentialSpec:
    """Validate geometry and build a :class:`PotentialSpec`.

    Raises:
        GeometryError: unless ``a > b > 0`` and ``c > b`` with finite values.
    """
    vals = [float(a), float(b), float(c), float(v0)]
    if not all(math.isfinite(v) for v in vals):
        raise GeometryError(f"non-finite parameter in {vals}")
    a, b, c, v0 = vals
    if b <= 0:
        raise GeometryError(f"half-width b must be positive, got {b}")
    if a <= b:
        raise GeometryError(f"left outer width a-b must be positive (a={a}, b={b})")
    if c <= b:
        raise GeometryError(f"right outer width c-b must be positive (c={c}, b={b})")
    return PotentialSpec(a, b, c, v0)


def spec_from_widths(b: float, d1: float, d2: float, v0: float = 0.0) -> PotentialSpec:
    return make_spec(b + d1, b, b + d2, v0)


class BasisKind(enum.Enum):
    TRIG = "trig"
    HYP = "hyp"
    LINEAR = "linear"


@dataclass(frozen=True)
class Basis:
    """Pair of free solutions on a constant-potential region.

    ``TRIG``: (sin ku, cos ku); ``HYP``: (sinh ku, cosh ku); ``LINEAR``: (u, 1),
    where ``u = x - anchor``.
    """

    kind: BasisKind
    wavenumber: float = 0.0

    @classmethod
    def for_local_energy(cls, e_minus_v: float) -> Basis:
        if abs(e_minus_v) < LINEAR_TOL:
            return cls(BasisKind.LINEAR, 0.0)
        if e_minus_v > 0:
            return cls(BasisKind.TRIG, math.sqrt(e_minus_v))
        return cls(BasisKind.HYP, math.sqrt(-e_minus_v))

    @property
    def curvature(self) -> float:
        """``g`` in ``f'' = g f`` for both basis functions."""
        k = self.wavenumber
        if self.kind is BasisKind.TRIG:
            return -k * k
        if self.kind is BasisKind.HYP:
            return k * k
        return 0.0

    def functions(self, u, order: int = 0):
        """Return the ``order``-th derivatives of the two basis functions at ``u``."""
        u = np.asarray(u, dtype=float)
        k = self.wavenumber
        if self.kind is BasisKind.LINEAR:
            if order == 0:
                return u, np.ones_like(u)
            if order == 1:
                return np.ones_like(u), np.zeros_like(u)
            return np.zeros_like(u), np.zeros_like(u)
        if self.kind is BasisKind.TRIG:
            f, g = np.sin(k * u), np.cos(k * u)
            # d/du (sin, cos) = k (cos, -sin)
            for _ in range(order):
                f, g = k * g, -k * f
            return f, g
        f, g = np.sinh(k * u), np.cosh(k * u)
        for _ in range(order):
            f, g = k * g, k * f
        return f, g


@dataclass(frozen=True)
class RegionSolution:
    """``coeff1 * f1(x - anchor) + coeff2 * f2(x - anchor)`` on ``[lo, hi]``."""

    lo: float
    hi: float
    basis: Basis
    coeff1: float
    coeff2: float
    anchor: float = 0.0

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def derivative(self, x, order: int = 0):
        f1, f2 = self.basis.functions(np.asarray(x, dtype=float) - self.anchor, order)
        return self.coeff1 * f1 + self.coeff2 * f2

    def __call__(self, x):
        return self.derivative(x, 0)

    def scaled(self, factor: float) -> RegionSolution:
        return RegionSolution(
            self.lo, self.hi, self.basis, factor * self.coeff1, factor * self.coeff2, self.anchor
        )


class LevelKind(enum.Enum):
    GENERIC = "generic"
    ZERO_ENERGY = "zero-energy"
    BARRIER_TOP = "barrier-top"


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    energy: float
    kind: LevelKind = LevelKind.GENERIC
    nodes: int | None = None


class SpecialKind(enum.Enum):
    HOLE_ZERO_ENERGY = "hole-zero-energy"
    BARRIER_TOP = "barrier-top"


@dataclass(frozen=True)
class SpecialRoot:
    """Critical ``v0`` at which E=0 (hole) or E=v0 (barrier) becomes level ``order``."""

    order: int
    v0: float
    kind: SpecialKind
    wavenumber: float = 0.0
