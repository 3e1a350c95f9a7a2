"""Bound states of a rectangular barrier or well between two rigid walls.

Includes the zero-energy and barrier-top states that appear only at critical
depths and heights, plus a Numerov shooting oracle for independent checks.
Units: 2m = hbar^2 = 1.
"""

from __future__ import annotations

from .conditions import (
    Regime,
    Residual,
    barrier_top_residual,
    delta_zero_energy_strength,
    eq19_residual,
    matching_determinant,
    zero_energy_barrier_residual,
    zero_energy_hole_residual,
)
from .errors import (
    DomainError,
    GeometryError,
    InconsistentSystem,
    NoConvergence,
    OutOfDomain,
    RectWellError,
    SpecMismatch,
    SpectrumIncomplete,
    WindowError,
)
from .oracle import ShootingResult, numerov_mismatch, numerov_spectrum
from .potential import (
    Basis,
    BasisKind,
    EnergyLevel,
    LevelKind,
    PotentialSpec,
    RegionSolution,
    SpecialKind,
    SpecialRoot,
    make_spec,
    spec_from_widths,
)
from .rootfind import (
    BracketedRoot,
    find_special_depths,
    find_special_heights,
    find_spectrum,
    refine,
    resolve_spec,
    scan_brackets,
)
from .wavefunction import (
    Wavefunction,
    build_wavefunction,
    count_nodes,
    evaluate,
    gram_matrix,
    inner_product,
    solve_coefficients,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
