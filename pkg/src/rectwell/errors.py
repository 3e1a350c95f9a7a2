"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class RectWellError(Exception):
    """Base class for all solver errors."""


class GeometryError(RectWellError, ValueError):
    """Invalid wall/barrier geometry."""


class WindowError(RectWellError, ValueError):
    """Energy lies inside an exclusion window around E=0 or E=V0."""


class DomainError(RectWellError, ValueError):
    """Residual evaluated outside the regime where it is defined."""


class NoConvergence(RectWellError, RuntimeError):
    """Root refinement did not converge."""


class SpectrumIncomplete(RectWellError, RuntimeError):
    """Fewer levels than requested were found below the scan ceiling."""


class InconsistentSystem(RectWellError, ValueError):
    """Matching equations have no nontrivial solution at the given energy."""


class OutOfDomain(RectWellError, ValueError):
    """Position outside the box [-a, c]."""


class SpecMismatch(RectWellError, ValueError):
    """Two wavefunctions were built on different potentials."""
