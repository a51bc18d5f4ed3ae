"""Dipole-dipole geometry: projected coupling matrices and ensemble generators.

The coupling T_ij is the zz projection of the static (non-retarded) dipole
tensor: T_ij = mu_z,i * mu_z,j * (1 - 3 n_a^2) / R^3, where mu_z,k is the
dipole magnitude projected on the cavity polarization axis and n_a is the
projection of the unit separation vector on that axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DegenerateGeometry
from .model import CavityParams, CouplingMatrix, Ensemble, Molecule, validate_ensemble

Z_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SlabSpec:
    """Square-lattice thin film in the xy-plane plus a probe molecule above it.

    The slab spans a (2*half_width+1)^2 lattice at z = 0 with the given
    lattice constant; the probe sits at (0, 0, z0).  The implied areal density
    is rho2 = 1 / lattice_constant^2.
    """

    lattice_constant: float
    half_width: int
    z0: float

    def __post_init__(self):
        if not self.lattice_constant > 0:
            raise ValueError(f"lattice_constant must be > 0, got {self.lattice_constant!r}")
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise ValueError(f"half_width must be an integer >= 1, got {self.half_width!r}")
        if not self.z0 > 0:
            raise ValueError(f"z0 must be > 0, got {self.z0!r}")

    @property
    def rho2(self) -> float:
        return 1.0 / self.lattice_constant**2


def projected_dipole_coupling(m_i: Molecule, m_j: Molecule, axis) -> float:
    """Polarization-projected dipole-dipole coupling between two molecules."""
    axis = np.asarray(axis, dtype=float)
    d = m_j.position - m_i.position
    r = float(np.linalg.norm(d))
    if r == 0.0:
        raise DegenerateGeometry("coincident molecules have no finite dipole coupling")
    n_a = float(d @ axis) / r
    muz_i = m_i.mu * float(m_i.orientation @ axis)
    muz_j = m_j.mu * float(m_j.orientation @ axis)
    return muz_i * muz_j * (1.0 - 3.0 * n_a * n_a) / r**3


def coupling_matrix(e: Ensemble) -> CouplingMatrix:
    """Symmetric matrix of projected couplings for every pair; zero diagonal."""
    pos = e.positions()
    axis = e.polarization_axis
    muz = e.mus() * (e.orientations() @ axis)
    d = pos[None, :, :] - pos[:, None, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, 1.0)
    if np.any(r2[~np.eye(e.n, dtype=bool)] == 0.0):
        raise DegenerateGeometry("coincident molecules in ensemble")
    r = np.sqrt(r2)
    n_a = (d @ axis) / r
    t = np.outer(muz, muz) * (1.0 - 3.0 * n_a**2) / r**3
    np.fill_diagonal(t, 0.0)
    return CouplingMatrix(t)


def projected_coupling_strengths(e: Ensemble) -> np.ndarray:
    """Per-molecule light-matter couplings g_i = g0 * (orientation_i . axis)."""
    return e.cavity.g0 * (e.orientations() @ e.polarization_axis)


def isotropic_vdw_baseline(e: Ensemble) -> float:
    """Orientation-independent pairwise dispersion energy, -C6 / R^6 per pair.

    Uses the isotropic two-level model (dipole components mu/sqrt(3) along all
    three axes), giving C6 = (2/3) mu_i^2 mu_j^2 / (omega_i + omega_j) so the
    pair value is -mu^4 / (3 omega R^6) for identical molecules.  Serves as
    the rotation-invariant reference in alignment scans.
    """
    pos = e.positions()
    mus = e.mus()
    oms = e.omega_ms()
    total = 0.0
    for i in range(e.n):
        for j in range(i):
            r = float(np.linalg.norm(pos[i] - pos[j]))
            if r == 0.0:
                raise DegenerateGeometry("coincident molecules in ensemble")
            total -= (2.0 / 3.0) * mus[i] ** 2 * mus[j] ** 2 / ((oms[i] + oms[j]) * r**6)
    return total


def _default_cavity(cavity: Optional[CavityParams]) -> CavityParams:
    return cavity if cavity is not None else CavityParams(omega_c=1.0, g0=0.0)


def make_chain(
    n: int,
    spacing: float,
    orientation=Z_AXIS,
    *,
    mu: float = 1.0,
    omega_m: float = 1.0,
    cavity: Optional[CavityParams] = None,
    polarization_axis=Z_AXIS,
) -> Ensemble:
    """Linear chain along z: positions (0, 0, k * spacing), k = 0..n-1."""
    if n < 1:
        raise ValueError("chain needs n >= 1")
    if spacing <= 0:
        raise DegenerateGeometry(f"chain spacing must be > 0, got {spacing!r}")
    mols = tuple(
        Molecule(position=(0.0, 0.0, k * spacing), orientation=orientation, mu=mu, omega_m=omega_m)
        for k in range(n)
    )
    return validate_ensemble(
        Ensemble(molecules=mols, cavity=_default_cavity(cavity), polarization_axis=polarization_axis)
    )


def make_random_gas(
    n: int,
    box_side: float,
    seed: int,
    *,
    min_separation: Optional[float] = None,
    orientation: Union[Sequence[float], str] = Z_AXIS,
    mu: float = 1.0,
    omega_m: float = 1.0,
    cavity: Optional[CavityParams] = None,
    polarization_axis=Z_AXIS,
    max_attempts_per_molecule: int = 10000,
) -> Ensemble:
    """Random gas in a cubic box, deterministic for a given seed.

    Positions are rejection-sampled with a minimum pair separation (default
    0.5 * box_side / n^(1/3)) so 1/R^3 couplings stay finite in scans.  Pass
    orientation="random" for independent isotropic dipole directions,
    otherwise all molecules share the given unit vector.
    """
    if n < 1:
        raise ValueError("gas needs n >= 1")
    if box_side <= 0:
        raise ValueError("box_side must be > 0")
    if min_separation is None:
        min_separation = 0.5 * box_side / n ** (1.0 / 3.0)
    rng = np.random.default_rng(seed)
    accepted: list[np.ndarray] = []
    attempts = 0
    while len(accepted) < n:
        if attempts > max_attempts_per_molecule * n:
            raise DegenerateGeometry(
                f"could not place {n} molecules with min_separation={min_separation!r} "
                f"in a box of side {box_side!r}"
            )
        attempts += 1
        cand = rng.uniform(0.0, box_side, size=3)
        if all(np.linalg.norm(cand - p) >= min_separation for p in accepted):
            accepted.append(cand)
    mols = []
    for p in accepted:
        if isinstance(orientation, str):
            if orientation != "random":
                raise ValueError(f"unknown orientation mode {orientation!r}")
            v = rng.standard_normal(3)
            v /= np.linalg.norm(v)
        else:
            v = orientation
        mols.append(Molecule(position=p, orientation=v, mu=mu, omega_m=omega_m))
    return validate_ensemble(
        Ensemble(molecules=tuple(mols), cavity=_default_cavity(cavity), polarization_axis=polarization_axis)
    )


def make_slab_with_probe(
    s: SlabSpec,
    *,
    orientation=Z_AXIS,
    mu: float = 1.0,
    omega_m: float = 1.0,
    cavity: Optional[CavityParams] = None,
    polarization_axis=Z_AXIS,
) -> Ensemble:
    """Probe molecule at (0, 0, z0) above a square slab lattice at z = 0.

    The probe is molecule 0; slab sites follow in row-major (x, then y) order.
    """
    w = s.half_width
    a = s.lattice_constant
    mols = [Molecule(position=(0.0, 0.0, s.z0), orientation=orientation, mu=mu, omega_m=omega_m)]
    for i in range(-w, w + 1):
        for j in range(-w, w + 1):
            mols.append(
                Molecule(position=(i * a, j * a, 0.0), orientation=orientation, mu=mu, omega_m=omega_m)
            )
    return Ensemble(
        molecules=tuple(mols), cavity=_default_cavity(cavity), polarization_axis=polarization_axis
    )


def slab_probe_sums(
    s: SlabSpec,
    *,
    mu_probe: float = 1.0,
    mu_slab: float = 1.0,
    kernel: str = "radial",
    tail_completion: bool = True,
) -> tuple[float, float]:
    """Incoherent and coherent probe-slab coupling sums for a slab geometry.

    Returns (sum_i T_0i^2, (sum_i T_0i)^2) where i runs over slab sites.

    kernel="radial" uses the coupling magnitude mu_probe*mu_slab/R^3, the form
    entering the thin-film scaling relations (incoherent ~ rho2/z0^4,
    coherent ~ rho2^2/z0^2).  kernel="projected" uses the signed zz-projected
    coupling with its angular factor (1 - 3 n_z^2); its coherent lattice sum
    cancels in the infinite-plane limit and follows no power law.

    With tail_completion (radial kernel only) the finite square lattice is
    completed by the continuum integral over the exterior of the square,
    which removes the O(z0/half_width) truncation bias from the coherent sum.
    """
    if kernel not in ("radial", "projected"):
        raise ValueError(f"unknown slab kernel {kernel!r}")
    w, a, z0 = s.half_width, s.lattice_constant, s.z0
    coords = np.arange(-w, w + 1) * a
    x, y = np.meshgrid(coords, coords, indexing="ij")
    r2 = x**2 + y**2 + z0**2
    r3 = r2 ** 1.5
    amp = mu_probe * mu_slab
    if kernel == "radial":
        t = amp / r3
    else:
        t = amp * (1.0 - 3.0 * z0**2 / r2) / r3
    incoherent = float(np.sum(t**2))
    coherent = float(np.sum(t))
    if tail_completion and kernel == "radial":
        half = (w + 0.5) * a
        rho2 = s.rho2
        # Exterior-of-square integral of 1/R^3 via the rectangle solid-angle
        # formula: integral over [-L, L]^2 of (r^2+z0^2)^(-3/2) dA = Omega/z0.
        square = 4.0 * math.atan2(half * half, z0 * math.sqrt(2.0 * half * half + z0 * z0)) / z0
        coherent += amp * rho2 * (2.0 * math.pi / z0 - square)
        # Incoherent tail approximated by the exterior of the inscribed disk;
        # it is O((z0/half)^4) relative and irrelevant to the fitted slope.
        incoherent += amp * amp * rho2 * math.pi / (2.0 * (half * half + z0 * z0) ** 2)
    return incoherent, coherent * coherent
