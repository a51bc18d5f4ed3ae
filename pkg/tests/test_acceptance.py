"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every tolerance is pinned here exactly as specified.  Criterion 1's 5-percent
clause is implemented faithfully and is expected to fail: the implemented
closed-form total differs from the exact-diagonalization shift at the pinned
couplings by ~25% (see tests/test_oracle_structure.py for the term-by-term
decomposition of that gap, and notes outside the package for the analysis).
Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import math
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from cavityvdw import (
    CavityParams,
    CouplingMatrix,
    Ensemble,
    GridSpec,
    HamiltonianSpec,
    Molecule,
    PerturbationInputs,
    ScanSpec,
    SlabSpec,
    ThreeBodySumConvention,
    bisect_root,
    converged_ground_energy,
    coupling_matrix,
    crossover_detuning,
    de_p1,
    de_p2,
    de_p2_detuned,
    e_crw1,
    e_crw2,
    e_dse1,
    e_dse2,
    e_vdw,
    isotropic_vdw_baseline,
    make_chain,
    make_random_gas,
    run_slab_scan,
    total_breakdown,
)

INCLUDE = ThreeBodySumConvention(include_i_equals_k=True)


def report(criterion: str, ok: bool, detail: str, t0: float, budget: float) -> None:
    elapsed = time.perf_counter() - t0
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail}) [{elapsed:.2f}s]")
    assert elapsed < budget, f"runtime {elapsed:.1f}s exceeds {budget}s budget"


def criterion1_chain(g0: float, mu_sq: float) -> Ensemble:
    return make_chain(4, 1.0, mu=math.sqrt(mu_sq),
                      cavity=CavityParams(omega_c=1.0, g0=g0, photon_cutoff=6))


def test_criterion_1_perturbative_vs_exact():
    t0 = time.perf_counter()
    e = criterion1_chain(0.02, 0.01)
    total = total_breakdown(e).total
    ed = converged_ground_energy(e, tol=1e-10).energy
    residual = abs(ed - total)
    # halving: g -> g/2 and T -> T/2 (mu^2 -> mu^2/2)
    e_half = criterion1_chain(0.01, 0.005)
    total_h = total_breakdown(e_half).total
    ed_h = converged_ground_energy(e_half, tol=1e-10).energy
    residual_h = abs(ed_h - total_h)
    factor = residual / residual_h
    ok_bound = residual <= 0.05 * abs(total)
    ok_factor = factor >= 4.0
    detail = (f"residual={residual:.3e} vs bound={0.05 * abs(total):.3e} "
              f"[{'ok' if ok_bound else 'VIOLATED'}]; halving factor={factor:.2f} "
              f"[{'ok' if ok_factor else 'VIOLATED'}]")
    report("1 perturbative-vs-exact", ok_bound and ok_factor, detail, t0, 30.0)
    assert ok_factor, detail
    assert ok_bound, detail  # known-unattainable: documented model error


def test_criterion_2_pairwise_vdw_oracle():
    t0 = time.perf_counter()
    t01 = 0.01
    mu = math.sqrt(t01)
    mols = (
        Molecule(position=(0, 0, 0), orientation=(0, 0, 1), mu=mu),
        Molecule(position=(1, 0, 0), orientation=(0, 0, 1), mu=mu),
    )
    e = Ensemble(molecules=mols, cavity=CavityParams(omega_c=1.0, g0=0.0, photon_cutoff=2))
    assert coupling_matrix(e).t[0, 1] == pytest.approx(t01, rel=1e-12)
    exact = 1.0 - math.sqrt(1.0 + t01 * t01)
    ed = converged_ground_energy(e, tol=1e-10).energy
    ok_ed = abs(ed - exact) <= 1e-12
    vdw = e_vdw(PerturbationInputs.from_ensemble(e))
    ok_vdw = abs(vdw - ed) <= abs(t01) ** 3
    report("2 pairwise-vdw-oracle", ok_ed and ok_vdw,
           f"|ED-exact|={abs(ed - exact):.2e}, |e_vdw-ED|={abs(vdw - ed):.2e}", t0, 1.0)
    assert ok_ed and ok_vdw


def test_criterion_3_crossover_detuning():
    t0 = time.perf_counter()
    worst = 0.0
    for n, g in ((4, 0.05), (6, 0.1), (10, 0.02)):
        e = make_chain(n, 1.0, mu=0.1, cavity=CavityParams(omega_c=1.0, g0=g))
        p = PerturbationInputs.from_ensemble(e)
        expected = (n - 2) * g * g / 4.0
        f = lambda d: de_p2_detuned(replace(p, omega_c=1.0 + 2.0 * d), INCLUDE)
        root = bisect_root(f, 0.5 * expected, 1.5 * expected, rtol=1e-14)
        rel = abs(root - expected) / expected
        worst = max(worst, rel)
        assert rel <= 1e-6, (n, g, rel)
        assert crossover_detuning(p) == pytest.approx(expected, rel=1e-14)
    report("3 crossover-detuning", True, f"worst rel dev={worst:.2e}", t0, 1.0)


def test_criterion_4_resonant_limit_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260810)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 8))
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        e = make_random_gas(
            n, 6.0, seed=int(rng.integers(10**9)),
            orientation=tuple(v),
            mu=float(rng.uniform(0.05, 0.3)),
            cavity=CavityParams(omega_c=1.0, g0=float(rng.uniform(0.0, 0.25))),
        )
        p = PerturbationInputs.from_ensemble(e)
        a, b = de_p2(p, INCLUDE), de_p2_detuned(p, INCLUDE)
        if a == b == 0.0:
            continue
        rel = abs(a - b) / max(abs(a), abs(b))
        worst = max(worst, rel)
        assert rel <= 1e-12, (n, rel)
    report("4 resonant-limit-identity", True, f"100 ensembles, worst rel={worst:.2e}", t0, 5.0)


def test_criterion_5_slab_scaling():
    t0 = time.perf_counter()
    spec = ScanSpec(
        kind="slab",
        grid=GridSpec(4.0, 10.0, 9, "log"),
        slab=SlabSpec(lattice_constant=1.0, half_width=60, z0=4.0),
    )
    summary = run_slab_scan(spec).summary
    inc, coh = summary["slope_incoherent"], summary["slope_coherent"]
    ok = abs(inc + 4.0) <= 0.1 and abs(coh + 2.0) <= 0.1
    report("5 slab-scaling", ok, f"incoherent={inc:.4f}, coherent={coh:.4f}", t0, 10.0)
    assert ok


def test_criterion_6_crw_dse_half_cancellation():
    t0 = time.perf_counter()
    n, g = 4, 0.02
    zero_t = CouplingMatrix(np.zeros((n, n)))
    p = PerturbationInputs(n=n, omega_m=1.0, omega_c=1.0, g=g, t=zero_t)
    ratio = (e_dse1(p) + e_crw1(p)) / e_dse1(p)
    ok_ratio = abs(ratio - 0.5) <= 0.002
    # oracle side: molecules with mu = 0, so T = 0 identically
    e = make_chain(n, 1.0, mu=0.0, cavity=CavityParams(omega_c=1.0, g0=g, photon_cutoff=6))
    ed = converged_ground_energy(
        e, HamiltonianSpec(True, True, True, False), tol=1e-10
    ).energy
    analytic = e_crw1(p) + e_dse1(p)
    ok_ed = abs(ed - analytic) <= 0.05 * abs(analytic)
    report("6 crw-dse-half-cancellation", ok_ratio and ok_ed,
           f"ratio={ratio:.6f}, |ED-analytic|/|analytic|={abs(ed - analytic)/abs(analytic):.2e}",
           t0, 10.0)
    assert ok_ratio and ok_ed


def test_criterion_7_distance_laws():
    t0 = time.perf_counter()
    base_vdw = base_crw2 = None
    for lam in (1.0, 2.0, 4.0):
        e = make_chain(2, lam, mu=0.1, cavity=CavityParams(omega_c=1.0, g0=0.05))
        p = PerturbationInputs.from_ensemble(e)
        if lam == 1.0:
            base_vdw, base_crw2 = e_vdw(p), e_crw2(p)
        else:
            assert e_vdw(p) * lam**6 == pytest.approx(base_vdw, rel=1e-12)
            assert e_crw2(p) * lam**3 == pytest.approx(base_crw2, rel=1e-12)
    report("7 distance-laws", True, "lambda^-6 and lambda^-3 exact to 1e-12", t0, 1.0)


def test_criterion_8_zero_projection_limit():
    t0 = time.perf_counter()
    perp = make_chain(3, 1.0, orientation=(1, 0, 0), mu=0.1,
                      cavity=CavityParams(omega_c=1.0, g0=0.1, photon_cutoff=4))
    bd = total_breakdown(perp)
    ok_terms = (bd.e_vdw == 0.0 and bd.de_p1 == 0.0 and bd.de_p2 == 0.0
                and bd.e_crw1 == 0.0 and bd.e_crw2 == 0.0
                and bd.e_dse1 == 0.0 and bd.e_dse2 == 0.0)
    aligned = make_chain(3, 1.0, orientation=(0, 0, 1), mu=0.1,
                         cavity=CavityParams(omega_c=1.0, g0=0.1, photon_cutoff=4))
    ok_iso = isotropic_vdw_baseline(perp) == isotropic_vdw_baseline(aligned)
    ed = converged_ground_energy(perp, tol=1e-10).energy
    ok_ed = abs(ed) <= 1e-13
    report("8 zero-projection-limit", ok_terms and ok_iso and ok_ed,
           f"all terms zero={ok_terms}, isotropic baseline unchanged={ok_iso}, |ED|={abs(ed):.1e}",
           t0, 5.0)
    assert ok_terms and ok_iso and ok_ed
