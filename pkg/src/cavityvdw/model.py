"""Core domain types: molecules, cavity parameters, ensembles, coupling matrices.

Units convention: hbar = 1, the molecular transition energy sets the energy
scale (omega_m = 1 is the usual choice), and lengths are chosen such that
mu^2 / R^3 is directly an energy.  All types are immutable after construction
and safe to share across concurrent tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateGeometry,
    NonPositiveEnergy,
    NonUnitOrientation,
)

_UNIT_NORM_TOL = 1e-12


def _frozen_vector(value, name: str) -> np.ndarray:
    """Convert to an immutable float64 3-vector."""
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
    v = v.copy()
    v.flags.writeable = False
    return v


def _check_unit(v: np.ndarray, name: str) -> None:
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _UNIT_NORM_TOL:
        raise NonUnitOrientation(f"{name} must be a unit vector; |v| = {norm!r}")


@dataclass(frozen=True)
class CavityParams:
    """Single-mode cavity: photon energy, maximal coupling, Fock truncation."""

    omega_c: float
    g0: float = 0.0
    photon_cutoff: int = 6

    def __post_init__(self):
        if not self.omega_c > 0:
            raise NonPositiveEnergy(f"omega_c must be > 0, got {self.omega_c!r}")
        if self.g0 < 0:
            raise ValueError(f"g0 must be >= 0, got {self.g0!r}")
        if int(self.photon_cutoff) != self.photon_cutoff or self.photon_cutoff < 1:
            raise ValueError(f"photon_cutoff must be an integer >= 1, got {self.photon_cutoff!r}")


@dataclass(frozen=True)
class Molecule:
    """Point two-level molecule: position, transition-dipole direction and size.

    mu is the transition-dipole magnitude; the direction of the dipole in the
    lab frame is `orientation` (unit vector).  omega_m is the transition energy.
    """

    position: np.ndarray
    orientation: np.ndarray
    mu: float = 1.0
    omega_m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "position", _frozen_vector(self.position, "position"))
        object.__setattr__(self, "orientation", _frozen_vector(self.orientation, "orientation"))
        _check_unit(self.orientation, "orientation")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu!r}")
        if not self.omega_m > 0:
            raise NonPositiveEnergy(f"omega_m must be > 0, got {self.omega_m!r}")


@dataclass(frozen=True)
class Ensemble:
    """N molecules plus the cavity they share.

    `polarization_axis` is the cavity-field polarization direction (default z).
    Alignment studies rotate the molecules, never the cavity.
    """

    molecules: Tuple[Molecule, ...]
    cavity: CavityParams
    polarization_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        object.__setattr__(self, "molecules", tuple(self.molecules))
        if len(self.molecules) < 1:
            raise ValueError("an ensemble needs at least one molecule")
        object.__setattr__(
            self, "polarization_axis", _frozen_vector(self.polarization_axis, "polarization_axis")
        )
        _check_unit(self.polarization_axis, "polarization_axis")

    @property
    def n(self) -> int:
        return len(self.molecules)

    def positions(self) -> np.ndarray:
        return np.array([m.position for m in self.molecules])

    def orientations(self) -> np.ndarray:
        return np.array([m.orientation for m in self.molecules])

    def mus(self) -> np.ndarray:
        return np.array([m.mu for m in self.molecules])

    def omega_ms(self) -> np.ndarray:
        return np.array([m.omega_m for m in self.molecules])

    @property
    def is_uniform(self) -> bool:
        """True when all omega_m and all projected couplings g_i coincide.

        The closed-form energy expressions are derived in the collective basis
        of identical emitters; non-uniform ensembles are still legal input for
        the exact-diagonalization path.
        """
        w = self.omega_ms()
        if w.max() - w.min() > 1e-12 * max(abs(w.max()), 1.0):
            return False
        g = self.cavity.g0 * (self.orientations() @ self.polarization_axis)
        return g.max() - g.min() <= 1e-12 * max(abs(g).max(), 1.0)


def validate_ensemble(e: Ensemble) -> Ensemble:
    """Check every ensemble invariant; return the ensemble unchanged if OK.

    Raises DegenerateGeometry for coincident positions, NonUnitOrientation for
    denormalized direction vectors, NonPositiveEnergy for omega <= 0.
    Non-uniform couplings are flagged via `Ensemble.is_uniform`, not rejected.
    """
    for k, m in enumerate(e.molecules):
        _check_unit(m.orientation, f"molecules[{k}].orientation")
        if not m.omega_m > 0:
            raise NonPositiveEnergy(f"molecules[{k}].omega_m must be > 0")
    _check_unit(e.polarization_axis, "polarization_axis")
    if not e.cavity.omega_c > 0:
        raise NonPositiveEnergy("cavity.omega_c must be > 0")
    pos = e.positions()
    for i in range(e.n):
        for j in range(i + 1, e.n):
            if float(np.linalg.norm(pos[i] - pos[j])) == 0.0:
                raise DegenerateGeometry(f"molecules {i} and {j} share position {pos[i].tolist()}")
    return e


@dataclass(frozen=True)
class CouplingMatrix:
    """Symmetric N x N matrix of polarization-projected dipole couplings T_ij."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {t.shape}")
        if not np.array_equal(t, t.T):
            raise ValueError("coupling matrix must be exactly symmetric")
        if np.any(np.diagonal(t) != 0.0):
            raise ValueError("coupling matrix must have a zero diagonal")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.t.shape[0]

    def pair_sum(self) -> float:
        """Coherent sum over distinct pairs, sum_{i>j} T_ij."""
        return float(np.sum(np.tril(self.t, k=-1)))

    def pair_sum_sq(self) -> float:
        """Incoherent sum over distinct pairs, sum_{i>j} T_ij^2."""
        return float(np.sum(np.tril(self.t, k=-1) ** 2))


@dataclass(frozen=True)
class EnergyBreakdown:
    """The seven second-order ground-state energy contributions plus their sum.

    e_vdw    : pairwise dispersion attraction, cavity independent
    de_p1    : 4-body interference term from the upper/lower pair polaritons
    de_p2    : 3-body interference term from the dark-state polariton pairs
    e_crw1   : one-body shift from the counter-rotating coupling
    e_crw2   : pairwise counter-rotating x dipole-dipole cross term (~1/R^3)
    e_dse1   : one-body dipole self-energy shift
    e_dse2   : pairwise self-energy x dipole-dipole cross term (= e_crw2)
    """

    e_vdw: float
    de_p1: float
    de_p2: float
    e_crw1: float
    e_crw2: float
    e_dse1: float
    e_dse2: float
    total: float

    _FIELDS = ("e_vdw", "de_p1", "de_p2", "e_crw1", "e_crw2", "e_dse1", "e_dse2")

    def __post_init__(self):
        s = math.fsum(getattr(self, f) for f in self._FIELDS)
        if abs(s - self.total) > 1e-12 * max(abs(s), abs(self.total), 1e-300):
            raise ValueError(f"total {self.total!r} is not the sum of the terms {s!r}")

    @classmethod
    def from_terms(cls, e_vdw, de_p1, de_p2, e_crw1, e_crw2, e_dse1, e_dse2) -> "EnergyBreakdown":
        total = math.fsum((e_vdw, de_p1, de_p2, e_crw1, e_crw2, e_dse1, e_dse2))
        return cls(e_vdw, de_p1, de_p2, e_crw1, e_crw2, e_dse1, e_dse2, total)

    def as_dict(self) -> dict:
        d = {f: getattr(self, f) for f in self._FIELDS}
        d["total"] = self.total
        return d


@dataclass(frozen=True)
class HamiltonianSpec:
    """Term mask for the exact-diagonalization Hamiltonian.

    Bare molecular and photon energies are always assembled; the flags control
    the rotating-wave coupling, the counter-rotating coupling, the dipole
    self-energy, and the dipole-dipole interaction.  `photon_cutoff` overrides
    the ensemble's Fock truncation when set.
    """

    include_rwa: bool = True
    include_crw: bool = True
    include_dse: bool = True
    include_ddi: bool = True
    photon_cutoff: Optional[int] = None

    def __post_init__(self):
        if self.photon_cutoff is not None and self.photon_cutoff < 1:
            raise ValueError("photon_cutoff override must be >= 1")


def effective_rabi(n_eff: int, g: float) -> float:
    """Collective Rabi scale sqrt(n_eff) * g for n_eff participating channels."""
    if n_eff < 0:
        raise ValueError(f"n_eff must be >= 0, got {n_eff!r}")
    if g < 0:
        raise ValueError(f"g must be >= 0, got {g!r}")
    return math.sqrt(n_eff) * g
