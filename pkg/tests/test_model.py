"""Core type invariants and the effective Rabi scale."""

import math

import numpy as np
import pytest

from cavityvdw import (
    CavityParams,
    CouplingMatrix,
    EnergyBreakdown,
    Ensemble,
    HamiltonianSpec,
    Molecule,
    NonPositiveEnergy,
    NonUnitOrientation,
    DegenerateGeometry,
    effective_rabi,
    validate_ensemble,
)


def pair(distance=1.0, orientation=(0, 0, 1), g0=0.0):
    mols = (
        Molecule(position=(0, 0, 0), orientation=orientation),
        Molecule(position=(0, 0, distance), orientation=orientation),
    )
    return Ensemble(molecules=mols, cavity=CavityParams(omega_c=1.0, g0=g0))


def test_cavity_params_invariants():
    c = CavityParams(omega_c=2.0, g0=0.1, photon_cutoff=3)
    assert c.omega_c == 2.0 and c.photon_cutoff == 3
    with pytest.raises(NonPositiveEnergy):
        CavityParams(omega_c=0.0)
    with pytest.raises(NonPositiveEnergy):
        CavityParams(omega_c=-1.0)
    with pytest.raises(ValueError):
        CavityParams(omega_c=1.0, g0=-0.1)
    with pytest.raises(ValueError):
        CavityParams(omega_c=1.0, photon_cutoff=0)


def test_molecule_invariants():
    m = Molecule(position=(1, 2, 3), orientation=(0, 0, 1), mu=0.5, omega_m=2.0)
    assert m.mu == 0.5
    with pytest.raises(NonUnitOrientation):
        Molecule(position=(0, 0, 0), orientation=(0, 0, 2))
    with pytest.raises(NonPositiveEnergy):
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1), omega_m=0.0)
    with pytest.raises(ValueError):
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1), mu=-1.0)
    # norm tolerance is 1e-12
    Molecule(position=(0, 0, 0), orientation=(0, 0, 1 + 5e-13))
    with pytest.raises(NonUnitOrientation):
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1 + 5e-12))


def test_validate_ensemble_ok_and_degenerate():
    e = pair(distance=1.0)
    assert validate_ensemble(e) is e
    with pytest.raises(DegenerateGeometry):
        validate_ensemble(pair(distance=0.0))


def test_ensemble_needs_molecules_and_unit_axis():
    with pytest.raises(ValueError):
        Ensemble(molecules=(), cavity=CavityParams(omega_c=1.0))
    with pytest.raises(NonUnitOrientation):
        Ensemble(
            molecules=(Molecule(position=(0, 0, 0), orientation=(0, 0, 1)),),
            cavity=CavityParams(omega_c=1.0),
            polarization_axis=(0, 0, 2),
        )


def test_uniformity_flag():
    assert pair(g0=0.1).is_uniform
    mols = (
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1)),
        Molecule(position=(0, 0, 1), orientation=(1, 0, 0)),
    )
    tilted = Ensemble(molecules=mols, cavity=CavityParams(omega_c=1.0, g0=0.1))
    assert not tilted.is_uniform  # projected couplings differ
    mols = (
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1), omega_m=1.0),
        Molecule(position=(0, 0, 1), orientation=(0, 0, 1), omega_m=1.5),
    )
    detuned = Ensemble(molecules=mols, cavity=CavityParams(omega_c=1.0, g0=0.1))
    assert not detuned.is_uniform


def test_immutability():
    e = pair()
    with pytest.raises(Exception):
        e.molecules[0].position[0] = 5.0  # read-only array
    with pytest.raises(Exception):
        e.cavity.omega_c = 2.0  # frozen dataclass


def test_effective_rabi_values():
    assert effective_rabi(10, 0.1) == pytest.approx(0.31622776601683794, rel=1e-15)
    assert effective_rabi(0, 0.5) == 0.0
    # index arithmetic 4N-2 with N=3 is just k=10
    assert effective_rabi(4 * 3 - 2, 0.1) == effective_rabi(10, 0.1)
    with pytest.raises(ValueError):
        effective_rabi(-1, 0.1)
    with pytest.raises(ValueError):
        effective_rabi(1, -0.1)


def test_effective_rabi_square_identity():
    rng = np.random.default_rng(1)
    for _ in range(200):
        k = int(rng.integers(0, 10**6))
        g = float(rng.uniform(0, 10**3))
        assert effective_rabi(k, g) ** 2 == pytest.approx(k * g * g, rel=1e-13)


def test_coupling_matrix_invariants():
    CouplingMatrix(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        CouplingMatrix(np.ones((2, 3)))
    bad = np.zeros((2, 2))
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        CouplingMatrix(bad)  # not symmetric
    bad = np.eye(2)
    with pytest.raises(ValueError):
        CouplingMatrix(bad)  # nonzero diagonal
    t = np.array([[0.0, -0.25], [-0.25, 0.0]])
    cm = CouplingMatrix(t)
    assert cm.pair_sum() == -0.25
    assert cm.pair_sum_sq() == 0.0625


def test_energy_breakdown_total_invariant():
    terms = dict(e_vdw=-1e-4, de_p1=-1e-7, de_p2=-2e-7, e_crw1=-3e-4,
                 e_crw2=1e-5, e_dse1=6e-4, e_dse2=1e-5)
    bd = EnergyBreakdown.from_terms(**terms)
    assert bd.total == pytest.approx(math.fsum(terms.values()), rel=1e-15)
    with pytest.raises(ValueError):
        EnergyBreakdown(**terms, total=1.0)


def test_hamiltonian_spec():
    HamiltonianSpec()  # all terms on by default
    HamiltonianSpec(False, False, False, False)  # bare-only mask is legal
    with pytest.raises(ValueError):
        HamiltonianSpec(photon_cutoff=0)
