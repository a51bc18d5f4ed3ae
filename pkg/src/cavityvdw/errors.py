"""Exception types shared across the package."""

from __future__ import annotations


class CavityVdwError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometry(CavityVdwError):
    """Two molecules coincide (or a generator produced zero spacing)."""


class NonUnitOrientation(CavityVdwError):
    """A direction vector is not normalized to unit length."""


class NonPositiveEnergy(CavityVdwError):
    """A transition or photon energy that must be positive is not."""


class NonUniformEnsemble(CavityVdwError):
    """Analytic formulas require one shared omega_m and one shared projected g."""


class NotResonant(CavityVdwError):
    """A resonant-only formula was called with omega_c != omega_m."""


class PerturbativeBreakdown(CavityVdwError):
    """Couplings too close to a polariton pole for second-order theory."""


class DimensionTooLarge(CavityVdwError):
    """Requested Hilbert-space dimension exceeds the dense-solve cap."""


class NoConvergence(CavityVdwError):
    """The eigensolver failed to reach the requested residual tolerance."""


class ParseError(CavityVdwError):
    """Malformed configuration text (syntax, unknown key, wrong type)."""


class ValidationError(CavityVdwError):
    """Well-formed configuration with a value violating an invariant."""


class MissingColumn(CavityVdwError):
    """A scan CSV lacks a column the caller requires."""


class MalformedSummary(CavityVdwError):
    """A scan CSV summary comment line does not parse as 'key = value'."""
