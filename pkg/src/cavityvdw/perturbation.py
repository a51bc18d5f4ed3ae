"""Closed-form second-order energy contributions for molecules in a cavity.

All expressions live in the collective basis of N identical emitters with a
shared transition energy omega_m and a shared projected coupling g, so the
entry point `total_breakdown` refuses non-uniform ensembles.  The effective
Rabi scales Omega_k = sqrt(k) g control the collective prefactors; each
formula refuses inputs within `pole_epsilon` of its polariton pole, where
second-order theory is meaningless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NonUniformEnsemble, NotResonant, PerturbativeBreakdown
from .geometry import coupling_matrix, projected_coupling_strengths
from .model import CouplingMatrix, EnergyBreakdown, Ensemble, validate_ensemble

DEFAULT_POLE_EPSILON = 0.05


@dataclass(frozen=True)
class ThreeBodySumConvention:
    """Index-set convention for the triple sum S = sum_{i,j,k} T_ij T_jk.

    T has a zero diagonal, so i = j and j = k terms vanish either way; the
    flag decides whether i = k terms (which reduce to sum_{i!=j} T_ij^2) are
    kept.  Default: keep them; the exact-diagonalization comparison selects
    this convention (see tests).
    """

    include_i_equals_k: bool = True


DEFAULT_CONVENTION = ThreeBodySumConvention()


@dataclass(frozen=True)
class PerturbationInputs:
    """Uniform-ensemble inputs for the closed-form energy expressions."""

    n: int
    omega_m: float
    omega_c: float
    g: float
    t: CouplingMatrix
    pole_epsilon: float = DEFAULT_POLE_EPSILON

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.omega_m > 0 or not self.omega_c > 0:
            raise ValueError("omega_m and omega_c must be > 0")
        if self.t.n != self.n:
            raise ValueError(f"coupling matrix is {self.t.n}x{self.t.n}, expected {self.n}")
        if not 0 < self.pole_epsilon < 1:
            raise ValueError("pole_epsilon must be in (0, 1)")

    @classmethod
    def from_ensemble(cls, e: Ensemble, pole_epsilon: float = DEFAULT_POLE_EPSILON) -> "PerturbationInputs":
        """Extract (n, omega_m, omega_c, g, T); reject non-uniform ensembles."""
        validate_ensemble(e)
        w = e.omega_ms()
        if w.max() - w.min() > 1e-12 * max(abs(w.max()), 1.0):
            raise NonUniformEnsemble("molecules have different omega_m")
        g = projected_coupling_strengths(e)
        if g.max() - g.min() > 1e-12 * max(np.abs(g).max(), 1.0):
            raise NonUniformEnsemble("molecules have different projected couplings g_i")
        return cls(
            n=e.n,
            omega_m=float(w[0]),
            omega_c=e.cavity.omega_c,
            g=float(g[0]),
            t=coupling_matrix(e),
            pole_epsilon=pole_epsilon,
        )

    @property
    def delta(self) -> float:
        """Frequency detuning (omega_c - omega_m) / 2."""
        return 0.5 * (self.omega_c - self.omega_m)

    def rabi_sq(self, k: int) -> float:
        """Omega_k^2 = k g^2 for k participating channels."""
        return k * self.g * self.g

    def _guard_pole(self, k: int) -> None:
        """Refuse Omega_k within pole_epsilon of the 2 omega_m degeneracy."""
        omega_k = math.sqrt(self.rabi_sq(k))
        limit = (1.0 - self.pole_epsilon) * 2.0 * self.omega_m
        if omega_k > limit:
            raise PerturbativeBreakdown(
                f"Omega_{k} = {omega_k!r} exceeds (1 - eps) * 2 omega_m = {limit!r}"
            )

    def _require_resonant(self) -> None:
        if abs(self.omega_c - self.omega_m) > 1e-12 * max(self.omega_m, self.omega_c):
            raise NotResonant(
                f"omega_c = {self.omega_c!r} != omega_m = {self.omega_m!r}"
            )


def three_body_sum(t: CouplingMatrix, convention: ThreeBodySumConvention = DEFAULT_CONVENTION) -> float:
    """Triple coupling sum S = sum_{i,j,k} T_ij T_jk over the convention's index set.

    With i = k included this is sum_j (row_j)^2 >= 0; excluding i = k
    subtracts sum_{i,j} T_ij^2.
    """
    rows = np.sum(t.t, axis=1)
    s = float(np.sum(rows * rows))
    if not convention.include_i_equals_k:
        s -= float(np.sum(t.t * t.t))
    return s


def e_vdw(p: PerturbationInputs) -> float:
    """Standard pairwise dispersion shift -(1/(2 omega_m)) sum_{i>j} T_ij^2.

    Cavity-frequency independent; always <= 0.
    """
    if p.n < 2:
        return 0.0
    return -p.t.pair_sum_sq() / (2.0 * p.omega_m)


def de_p1(p: PerturbationInputs) -> float:
    """4-body interference term from the bright pair-polariton doublet.

    -[Omega_{4N-2}^2 / (omega (4 omega^2 - Omega_{4N-2}^2))]
      * (sum_{i>j} T_ij)^2 / (N (2N - 1)).
    Depends on T only through the coherent pair sum; <= 0 under the pole guard.
    """
    if p.n < 2 or p.g == 0.0:
        return 0.0
    rabi_index = 4 * p.n - 2
    p._guard_pole(rabi_index)
    w = p.omega_m
    om2 = p.rabi_sq(rabi_index)
    coherent = p.t.pair_sum()
    return -(om2 / (w * (4.0 * w * w - om2))) * coherent * coherent / (p.n * (2 * p.n - 1))


def de_p2(p: PerturbationInputs, convention: ThreeBodySumConvention = DEFAULT_CONVENTION) -> float:
    """3-body interference term from the dark-state polariton pairs.

    -[Omega_{N-2}^2 / (omega (4 omega^2 - Omega_{N-2}^2))] * S / (2 (N - 2))
    with S = three_body_sum(T).  Evaluated with Omega_{N-2}^2/(N-2) cancelled
    to g^2, which also resolves the removable 0/0 at N = 2.
    """
    if p.n < 2 or p.g == 0.0:
        return 0.0
    k = p.n - 2
    p._guard_pole(k)
    w = p.omega_m
    om2 = p.rabi_sq(k)
    s = three_body_sum(p.t, convention)
    return -(p.g * p.g / (2.0 * w * (4.0 * w * w - om2))) * s


def de_p2_detuned(p: PerturbationInputs, convention: ThreeBodySumConvention = DEFAULT_CONVENTION) -> float:
    """Off-resonance generalization of the 3-body term.

    With delta = (omega_c - omega_m)/2 and Delta^2 = Omega_{N-2}^2 + delta^2:

      -[ 2 omega_m / ((2 omega_m + delta)^2 - Delta^2) - 1/(2 omega_m) ] * S/(N-2)

    computed in the cancelled form -(Omega^2 - 4 omega_m delta) S /
    (2 omega_m D (N-2)), D = (2 omega_m + delta)^2 - Delta^2, so the value
    vanishes identically at the crossover detuning delta_c = Omega^2/(4 omega_m)
    and reduces exactly to `de_p2` at delta = 0.  The S/(N-2) normalization is
    fixed by that resonant limit.  N = 2 is defined only at delta = 0 (the
    same removable singularity as in `de_p2`); off resonance it has no finite
    continuation and raises PerturbativeBreakdown.
    """
    if p.n < 2 or p.g == 0.0:
        return 0.0
    delta = p.delta
    if p.n == 2:
        if delta == 0.0:
            return de_p2(p, convention)
        raise PerturbativeBreakdown(
            "the detuned 3-body term has no finite N = 2 continuation off resonance"
        )
    w = p.omega_m
    om2 = p.rabi_sq(p.n - 2)
    denom = (2.0 * w + delta) ** 2 - (om2 + delta * delta)
    # Same accept set as the resonant guard at delta = 0:
    # |D| >= 4 w^2 (1 - (1-eps)^2)  <=>  Omega <= (1-eps) 2w when delta = 0.
    eps = p.pole_epsilon
    if abs(denom) < 4.0 * w * w * (1.0 - (1.0 - eps) ** 2):
        raise PerturbativeBreakdown(
            f"detuned denominator {denom!r} within pole margin at delta = {delta!r}"
        )
    s = three_body_sum(p.t, convention)
    return -((om2 - 4.0 * w * delta) / (2.0 * w * denom)) * s / (p.n - 2)


def crossover_detuning(p: PerturbationInputs) -> float:
    """Detuning delta_c = (N - 2) g^2 / (4 omega_m) where the 3-body term changes sign."""
    return (p.n - 2) * p.g * p.g / (4.0 * p.omega_m)


def e_crw1(p: PerturbationInputs) -> float:
    """One-body shift from the counter-rotating coupling, resonant form.

    -2 omega Omega_N^2 / ((2 omega)^2 - Omega_{4N-2}^2); reduces to
    -Omega_N^2 / (2 omega) at leading order in g.
    """
    p._require_resonant()
    if p.g == 0.0:
        return 0.0
    p._guard_pole(4 * p.n - 2)
    w = p.omega_m
    return -2.0 * w * p.rabi_sq(p.n) / (4.0 * w * w - p.rabi_sq(4 * p.n - 2))


def e_crw2(p: PerturbationInputs) -> float:
    """Counter-rotating x dipole-dipole cross term, resonant form.

    -4 g^2 sum_{i>j} T_ij / ((2 omega)^2 - Omega_{4N-2}^2): a pairwise 1/R^3
    interaction between cavity-induced dipoles whose sign follows the coherent
    pair sum.
    """
    p._require_resonant()
    if p.g == 0.0 or p.n < 2:
        return 0.0
    p._guard_pole(4 * p.n - 2)
    w = p.omega_m
    return -4.0 * p.g * p.g * p.t.pair_sum() / (4.0 * w * w - p.rabi_sq(4 * p.n - 2))


def e_dse1(p: PerturbationInputs) -> float:
    """First-order dipole self-energy shift N g^2 / omega_c (Sigma^2 expectation N)."""
    if p.g == 0.0:
        return 0.0
    return p.n * p.g * p.g / p.omega_c


def e_dse2(p: PerturbationInputs) -> float:
    """Self-energy x dipole-dipole cross term; identical to `e_crw2`."""
    return e_crw2(p)


def collective_prefactor(
    n: int, g: float, omega: float, pole_epsilon: float = DEFAULT_POLE_EPSILON
) -> float:
    """Collective enhancement factor Omega_N^2 / (omega^2 - Omega_N^2 / 4).

    Grows super-linearly in N g^2 toward the polariton pole at Omega_N = 2 omega;
    the g -> 0 limit is Omega_N^2 / omega^2.
    """
    om2 = n * g * g
    if math.sqrt(om2) > (1.0 - pole_epsilon) * 2.0 * omega:
        raise PerturbativeBreakdown(
            f"Omega_N = {math.sqrt(om2)!r} within pole margin of 2 omega = {2 * omega!r}"
        )
    return om2 / (omega * omega - 0.25 * om2)


def total_breakdown(
    e: Ensemble,
    convention: ThreeBodySumConvention = DEFAULT_CONVENTION,
    pole_epsilon: float = DEFAULT_POLE_EPSILON,
) -> EnergyBreakdown:
    """All seven second-order contributions for a uniform resonant ensemble.

    Off resonance only `e_vdw` and `de_p2_detuned` have closed forms; those
    are exposed directly and through the detuning scan, so this entry point
    requires omega_c = omega_m.
    """
    p = PerturbationInputs.from_ensemble(e, pole_epsilon=pole_epsilon)
    p._require_resonant()
    return EnergyBreakdown.from_terms(
        e_vdw=e_vdw(p),
        de_p1=de_p1(p),
        de_p2=de_p2(p, convention),
        e_crw1=e_crw1(p),
        e_crw2=e_crw2(p),
        e_dse1=e_dse1(p),
        e_dse2=e_dse2(p),
    )
