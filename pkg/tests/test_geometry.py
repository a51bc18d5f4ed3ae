"""Projected dipole couplings, generators, and slab lattice sums."""

import math

import numpy as np
import pytest

from cavityvdw import (
    CavityParams,
    DegenerateGeometry,
    Ensemble,
    Molecule,
    SlabSpec,
    coupling_matrix,
    isotropic_vdw_baseline,
    make_chain,
    make_random_gas,
    make_slab_with_probe,
    projected_coupling_strengths,
    projected_dipole_coupling,
    slab_probe_sums,
)

Z = np.array([0.0, 0.0, 1.0])


def mol(pos, ori=(0, 0, 1), mu=1.0):
    return Molecule(position=pos, orientation=ori, mu=mu)


def test_axial_equatorial_and_magic_angle():
    # axial pair at R=2: (1 - 3)/8
    assert projected_dipole_coupling(mol((0, 0, 0)), mol((0, 0, 2)), Z) == pytest.approx(-0.25, rel=1e-15)
    # equatorial pair at R=1: (1 - 0)/1
    assert projected_dipole_coupling(mol((0, 0, 0)), mol((1, 0, 0)), Z) == pytest.approx(1.0, rel=1e-15)
    # separation at the magic angle cos^2 = 1/3 kills the coupling
    d = np.array([math.sqrt(2.0), 0.0, 1.0]) / math.sqrt(3.0)
    t = projected_dipole_coupling(mol((0, 0, 0)), mol(tuple(2.0 * d)), Z)
    assert abs(t) < 1e-12
    with pytest.raises(DegenerateGeometry):
        projected_dipole_coupling(mol((0, 0, 0)), mol((0, 0, 0)), Z)


def test_coupling_matrix_small_cases():
    e1 = Ensemble(molecules=(mol((0, 0, 0)),), cavity=CavityParams(omega_c=1.0))
    assert np.array_equal(coupling_matrix(e1).t, np.zeros((1, 1)))

    e2 = Ensemble(molecules=(mol((0, 0, 0)), mol((0, 0, 2))), cavity=CavityParams(omega_c=1.0))
    assert np.allclose(coupling_matrix(e2).t, [[0, -0.25], [-0.25, 0]], rtol=1e-15)

    chain = make_chain(3, 1.0)
    t = coupling_matrix(chain).t
    assert t[0, 1] == pytest.approx(-2.0, rel=1e-15)
    assert t[1, 2] == pytest.approx(-2.0, rel=1e-15)
    assert t[0, 2] == pytest.approx(-0.25, rel=1e-15)


def test_symmetry_is_exact():
    e = make_random_gas(6, 5.0, seed=3, orientation="random")
    t = coupling_matrix(e).t
    assert np.array_equal(t, t.T)
    assert np.all(np.diagonal(t) == 0.0)


def test_inverse_cube_scaling():
    e = make_random_gas(5, 5.0, seed=11)
    t1 = coupling_matrix(e).t
    doubled = Ensemble(
        molecules=tuple(
            Molecule(position=2.0 * m.position, orientation=m.orientation, mu=m.mu, omega_m=m.omega_m)
            for m in e.molecules
        ),
        cavity=e.cavity,
    )
    t2 = coupling_matrix(doubled).t
    assert np.allclose(t2 * 8.0, t1, rtol=1e-12, atol=0)


def test_rotation_covariance():
    rng = np.random.default_rng(5)
    e = make_random_gas(5, 4.0, seed=9, orientation="random")
    t1 = coupling_matrix(e).t
    for _ in range(3):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        rotated = Ensemble(
            molecules=tuple(
                Molecule(position=q @ m.position, orientation=q @ m.orientation, mu=m.mu)
                for m in e.molecules
            ),
            cavity=e.cavity,
            polarization_axis=q @ e.polarization_axis,
        )
        t2 = coupling_matrix(rotated).t
        assert np.allclose(t2, t1, rtol=0, atol=1e-12 * np.abs(t1).max())


def test_projected_strengths():
    cav = CavityParams(omega_c=1.0, g0=0.1)
    e = Ensemble(
        molecules=(
            mol((0, 0, 0), (0, 0, 1)),
            mol((1, 0, 0), (1, 0, 0)),
            mol((2, 0, 0), (math.sin(math.pi / 3), 0, math.cos(math.pi / 3))),
        ),
        cavity=cav,
    )
    g = projected_coupling_strengths(e)
    assert g[0] == pytest.approx(0.1, rel=1e-15)
    assert g[1] == pytest.approx(0.0, abs=1e-17)
    assert g[2] == pytest.approx(0.05, rel=1e-12)


def test_make_chain_layout():
    e = make_chain(3, 1.0)
    assert np.array_equal(e.positions(), [[0, 0, 0], [0, 0, 1], [0, 0, 2]])
    with pytest.raises(DegenerateGeometry):
        make_chain(2, 0.0)


def test_random_gas_deterministic_and_separated():
    a = make_random_gas(5, 10.0, seed=42)
    b = make_random_gas(5, 10.0, seed=42)
    assert np.array_equal(a.positions(), b.positions())
    assert np.array_equal(a.orientations(), b.orientations())
    c = make_random_gas(5, 10.0, seed=43)
    assert not np.array_equal(a.positions(), c.positions())
    min_sep = 0.5 * 10.0 / 5 ** (1 / 3)
    pos = a.positions()
    for i in range(5):
        for j in range(i):
            assert np.linalg.norm(pos[i] - pos[j]) >= min_sep
    rnd = make_random_gas(4, 8.0, seed=1, orientation="random")
    assert np.allclose(np.linalg.norm(rnd.orientations(), axis=1), 1.0, atol=1e-12)


def test_slab_with_probe_layout():
    e = make_slab_with_probe(SlabSpec(lattice_constant=1.0, half_width=2, z0=3.0))
    assert e.n == 26  # 25 slab sites + probe
    assert np.array_equal(e.molecules[0].position, [0, 0, 3.0])
    assert np.all(np.array([m.position[2] for m in e.molecules[1:]]) == 0.0)


def test_slab_spec_invariants():
    with pytest.raises(ValueError):
        SlabSpec(lattice_constant=0.0, half_width=2, z0=1.0)
    with pytest.raises(ValueError):
        SlabSpec(lattice_constant=1.0, half_width=0, z0=1.0)
    with pytest.raises(ValueError):
        SlabSpec(lattice_constant=1.0, half_width=2, z0=0.0)
    assert SlabSpec(lattice_constant=0.5, half_width=2, z0=1.0).rho2 == pytest.approx(4.0)


def test_isotropic_baseline_pair_value_and_rotation_invariance():
    # isotropic two-level model: -mu^4 / (3 omega R^6) per pair
    e = Ensemble(
        molecules=(mol((0, 0, 0), mu=0.5), mol((0, 0, 2.0), mu=0.5)),
        cavity=CavityParams(omega_c=1.0),
    )
    expected = -(0.5**4) / (3.0 * 1.0 * 2.0**6)
    assert isotropic_vdw_baseline(e) == pytest.approx(expected, rel=1e-14)
    # independent of dipole orientations by construction
    tilted = Ensemble(
        molecules=(mol((0, 0, 0), (1, 0, 0), mu=0.5), mol((0, 0, 2.0), (0, 1, 0), mu=0.5)),
        cavity=e.cavity,
    )
    assert isotropic_vdw_baseline(tilted) == isotropic_vdw_baseline(e)


def test_slab_probe_sums_match_explicit_matrix_row():
    # small slab: the projected kernel must reproduce the coupling-matrix row sums
    s = SlabSpec(lattice_constant=1.0, half_width=3, z0=2.0)
    e = make_slab_with_probe(s, mu=0.7)
    t_row = coupling_matrix(e).t[0, 1:]
    inc, coh2 = slab_probe_sums(s, mu_probe=0.7, mu_slab=0.7, kernel="projected", tail_completion=False)
    assert inc == pytest.approx(float(np.sum(t_row**2)), rel=1e-12)
    assert coh2 == pytest.approx(float(np.sum(t_row)) ** 2, rel=1e-12)


def test_slab_radial_tail_completion_small_for_incoherent():
    s = SlabSpec(lattice_constant=1.0, half_width=40, z0=4.0)
    inc_raw, _ = slab_probe_sums(s, kernel="radial", tail_completion=False)
    inc_tail, coh2_tail = slab_probe_sums(s, kernel="radial", tail_completion=True)
    assert abs(inc_tail - inc_raw) / inc_raw < 1e-4
    # coherent sum approaches the infinite-plane value 2 pi rho2 / z0 once completed
    assert math.sqrt(coh2_tail) == pytest.approx(2.0 * math.pi / 4.0, rel=1e-4)
