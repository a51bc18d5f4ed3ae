"""Deterministic parameter scans reproducing the predicted cavity effects.

Each scan maps a grid onto rows of named energy columns plus a summary of
fitted quantities (roots, slopes, decay exponents).  Scan points that hit a
pole guard or a solver error are emitted with an explicit status column so
fits never run over silent gaps.  Identical specs produce bit-identical rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional

import numpy as np

from .errors import (
    CavityVdwError,
    DegenerateGeometry,
    DimensionTooLarge,
    NoConvergence,
    NonPositiveEnergy,
    NonUniformEnsemble,
    NotResonant,
    PerturbativeBreakdown,
    ValidationError,
)
from .geometry import SlabSpec, isotropic_vdw_baseline, slab_probe_sums
from .model import CavityParams, Ensemble, HamiltonianSpec, Molecule
from .oracle import DEFAULT_DIMENSION_CAP, ground_shift
from .perturbation import (
    DEFAULT_CONVENTION,
    DEFAULT_POLE_EPSILON,
    PerturbationInputs,
    ThreeBodySumConvention,
    crossover_detuning,
    collective_prefactor,
    de_p1,
    de_p2,
    de_p2_detuned,
    e_crw1,
    e_crw2,
    e_dse1,
    e_dse2,
    e_vdw,
    total_breakdown,
)

_POINT_ERRORS = (
    PerturbativeBreakdown,
    NotResonant,
    NonUniformEnsemble,
    DimensionTooLarge,
    NoConvergence,
    DegenerateGeometry,
    NonPositiveEnergy,
)

SCAN_KINDS = ("detuning", "density", "slab", "alignment", "validate")


@dataclass(frozen=True)
class GridSpec:
    """1D scan grid; log scale requires positive bounds."""

    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.points < 2:
            raise ValidationError("grid.points must be >= 2")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"grid.scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValidationError("log grid requires positive start and stop")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScanSpec:
    """Everything a scan run needs; built by the CLI layer from a config."""

    kind: str
    grid: GridSpec
    ensemble: Optional[Ensemble] = None
    slab: Optional[SlabSpec] = None
    slab_mu: float = 1.0
    chain_spacing: float = 1.0
    oracle_enabled: bool = False
    convention: ThreeBodySumConvention = DEFAULT_CONVENTION
    pole_epsilon: float = DEFAULT_POLE_EPSILON
    oracle_tol: float = 1e-10
    dimension_cap: int = DEFAULT_DIMENSION_CAP
    slab_kernel: str = "radial"
    rotate_positions: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCAN_KINDS:
            raise ValidationError(f"scan.kind must be one of {SCAN_KINDS}, got {self.kind!r}")


@dataclass
class ScanResult:
    """Ordered rows (one per grid point) plus fitted summary quantities."""

    columns: List[str]
    rows: List[Dict[str, object]]
    summary: Dict[str, object] = field(default_factory=dict)

    @property
    def any_errors(self) -> bool:
        return any(r.get("status") != "ok" for r in self.rows)

    def column(self, name: str, ok_only: bool = True) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(name)
        rows = [r for r in self.rows if not ok_only or r.get("status") == "ok"]
        return np.array([r[name] for r in rows], dtype=float)


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Ordinary least squares slope of ln y vs ln x with its standard error."""
    if len(x) < 2:
        raise ValueError("need at least two points to fit a slope")
    if np.any(np.asarray(x) <= 0) or np.any(np.asarray(y) <= 0):
        raise ValueError("log-log fit requires positive data")
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    mx = lx.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    slope = float(np.sum((lx - mx) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * mx)
    resid = ly - (intercept + slope * lx)
    dof = len(x) - 2
    stderr = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 else 0.0
    return slope, stderr


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                rtol: float = 1e-12, max_iter: int = 200) -> float:
    """Plain bisection for a bracketed sign change; deterministic."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) <= rtol * max(abs(lo), abs(hi), 1e-300):
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _with_omega_c(e: Ensemble, omega_c: float) -> Ensemble:
    return replace(e, cavity=replace(e.cavity, omega_c=omega_c))


def run_detuning_scan(spec: ScanSpec) -> ScanResult:
    """3-body term vs detuning delta = (omega_c - omega_m)/2, with its sign-change root."""
    if spec.ensemble is None:
        raise ValidationError("detuning scan requires an ensemble")
    base = PerturbationInputs.from_ensemble(spec.ensemble, pole_epsilon=spec.pole_epsilon)

    def value_at(delta: float) -> float:
        omega_c = base.omega_m + 2.0 * delta
        if omega_c <= 0:
            raise NonPositiveEnergy(f"omega_c = {omega_c!r} <= 0 at delta = {delta!r}")
        p = replace(base, omega_c=omega_c)
        return de_p2_detuned(p, spec.convention)

    columns = ["delta", "de_p2", "status"]
    if spec.oracle_enabled:
        columns.append("ed_shift")
    rows: List[Dict[str, object]] = []
    for delta in spec.grid.values():
        row: Dict[str, object] = {"delta": float(delta), "status": "ok"}
        try:
            row["de_p2"] = value_at(float(delta))
            if spec.oracle_enabled:
                detuned = _with_omega_c(spec.ensemble, base.omega_m + 2.0 * float(delta))
                row["ed_shift"] = ground_shift(
                    detuned, tol=spec.oracle_tol, dimension_cap=spec.dimension_cap
                )
        except _POINT_ERRORS as exc:
            row["status"] = type(exc).__name__
            row.setdefault("de_p2", float("nan"))
            if spec.oracle_enabled:
                row.setdefault("ed_shift", float("nan"))
        rows.append(row)

    result = ScanResult(columns=columns, rows=rows)
    delta_c = crossover_detuning(base)
    result.summary["crossover_delta"] = delta_c
    root = _bracketed_root(rows, value_at)
    result.summary["root_delta"] = root if root is not None else float("nan")
    if root is not None and delta_c != 0.0:
        result.summary["root_deviation_rel"] = abs(root - delta_c) / abs(delta_c)
    return result


def _bracketed_root(rows: List[Dict[str, object]], f: Callable[[float], float]) -> Optional[float]:
    """Bisection root between the first adjacent ok-status rows of opposite sign."""
    ok = [r for r in rows if r["status"] == "ok"]
    for a, b in zip(ok, ok[1:]):
        va, vb = float(a["de_p2"]), float(b["de_p2"])
        if va == 0.0:
            return float(a["delta"])
        if va * vb < 0:
            return bisect_root(f, float(a["delta"]), float(b["delta"]))
    if ok and float(ok[-1]["de_p2"]) == 0.0:
        return float(ok[-1]["delta"])
    return None


def run_density_scan(spec: ScanSpec) -> ScanResult:
    """Collective terms vs molecule count N on a fixed-spacing chain.

    Grid values are rounded to integers >= 1.  The summary reports how far the
    collective prefactor at the largest N sits above the linear-in-N
    extrapolation from the smallest N.
    """
    if spec.ensemble is None:
        raise ValidationError("density scan requires a template ensemble")
    template = spec.ensemble
    if template.n < 1:
        raise ValidationError("template ensemble is empty")
    mol0 = template.molecules[0]

    columns = ["n", "de_p1", "de_p2", "e_crw1", "prefactor", "status"]
    rows: List[Dict[str, object]] = []
    for raw in spec.grid.values():
        n = max(1, int(round(float(raw))))
        row: Dict[str, object] = {"n": n, "status": "ok"}
        try:
            mols = tuple(
                Molecule(
                    position=(0.0, 0.0, k * spec.chain_spacing),
                    orientation=mol0.orientation,
                    mu=mol0.mu,
                    omega_m=mol0.omega_m,
                )
                for k in range(n)
            )
            e = replace(template, molecules=mols)
            p = PerturbationInputs.from_ensemble(e, pole_epsilon=spec.pole_epsilon)
            row["de_p1"] = de_p1(p)
            row["de_p2"] = de_p2(p, spec.convention)
            row["e_crw1"] = e_crw1(p)
            row["prefactor"] = collective_prefactor(
                n, p.g, p.omega_m, pole_epsilon=spec.pole_epsilon
            )
        except _POINT_ERRORS as exc:
            row["status"] = type(exc).__name__
            for c in columns:
                row.setdefault(c, float("nan"))
        rows.append(row)

    result = ScanResult(columns=columns, rows=rows)
    ok = [r for r in rows if r["status"] == "ok" and r["n"] >= 1]
    if len(ok) >= 2:
        n0, p0 = ok[0]["n"], float(ok[0]["prefactor"])
        n1, p1 = ok[-1]["n"], float(ok[-1]["prefactor"])
        if p0 != 0.0:
            linear = p0 * n1 / n0
            result.summary["prefactor_linear_deviation_rel"] = (p1 - linear) / linear
    return result


def run_slab_scan(spec: ScanSpec) -> ScanResult:
    """Probe-slab coupling sums vs probe distance z0 with fitted power laws."""
    if spec.slab is None:
        raise ValidationError("slab scan requires a slab geometry")
    s = spec.slab
    lo, hi = min(spec.grid.start, spec.grid.stop), max(spec.grid.start, spec.grid.stop)
    if lo < 2.0 * s.lattice_constant or hi > s.half_width * s.lattice_constant / 5.0:
        raise ValidationError(
            "slab z0 grid must satisfy 2*lattice_constant <= z0 <= half_width*lattice_constant/5"
        )

    columns = ["z0", "incoherent_sum", "coherent_sum_sq", "status"]
    rows: List[Dict[str, object]] = []
    for z0 in spec.grid.values():
        inc, coh2 = slab_probe_sums(
            replace(s, z0=float(z0)),
            mu_probe=spec.slab_mu,
            mu_slab=spec.slab_mu,
            kernel=spec.slab_kernel,
        )
        rows.append({"z0": float(z0), "incoherent_sum": inc, "coherent_sum_sq": coh2, "status": "ok"})

    result = ScanResult(columns=columns, rows=rows)
    z = result.column("z0")
    for name, key in (("incoherent_sum", "slope_incoherent"), ("coherent_sum_sq", "slope_coherent")):
        vals = result.column(name)
        if np.all(vals > 0):
            slope, err = fit_loglog_slope(z, vals)
            result.summary[key] = slope
            result.summary[key + "_stderr"] = err
    return result


def _rotated_ensemble(e: Ensemble, theta: float, rotate_positions: bool) -> Ensemble:
    """Rigidly rotate molecular orientations (and optionally positions) by theta.

    The rotation tilts vectors away from the polarization axis about a fixed
    perpendicular axis, so theta = 0 is the original ensemble.
    """
    axis = e.polarization_axis
    # Deterministic perpendicular axis: cross with the least-aligned basis vector.
    trial = np.eye(3)[int(np.argmin(np.abs(axis)))]
    perp = np.cross(axis, trial)
    perp = perp / np.linalg.norm(perp)
    c, s = math.cos(theta), math.sin(theta)
    k = perp
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    rot = np.eye(3) * c + kx * s + np.outer(k, k) * (1 - c)

    mols = []
    for m in e.molecules:
        o = rot @ m.orientation
        o = o / np.linalg.norm(o)
        pos = rot @ m.position if rotate_positions else m.position
        mols.append(Molecule(position=pos, orientation=o, mu=m.mu, omega_m=m.omega_m))
    return replace(e, molecules=tuple(mols))


def run_alignment_scan(spec: ScanSpec) -> ScanResult:
    """Energy landscape vs tilt angle theta between dipoles and the polarization.

    The e_vdw_iso column is the isotropic pairwise baseline (theta independent
    by construction); the projected e_vdw and all cavity terms vary with the
    projections.  total = e_vdw_iso + cavity terms.
    """
    if spec.ensemble is None:
        raise ValidationError("alignment scan requires an ensemble")
    baseline = isotropic_vdw_baseline(spec.ensemble)

    columns = [
        "theta", "e_vdw_iso", "e_vdw_proj", "de_p1", "de_p2", "e_crw1", "e_crw2",
        "e_dse1", "e_dse2", "cavity_total", "total", "status",
    ]
    if spec.oracle_enabled:
        columns.insert(columns.index("status"), "ed_total")
    rows: List[Dict[str, object]] = []
    for theta in spec.grid.values():
        row: Dict[str, object] = {"theta": float(theta), "e_vdw_iso": baseline, "status": "ok"}
        try:
            e_rot = _rotated_ensemble(spec.ensemble, float(theta), spec.rotate_positions)
            p = PerturbationInputs.from_ensemble(e_rot, pole_epsilon=spec.pole_epsilon)
            terms = {
                "e_vdw_proj": e_vdw(p),
                "de_p1": de_p1(p),
                "de_p2": de_p2(p, spec.convention),
                "e_crw1": e_crw1(p),
                "e_crw2": e_crw2(p),
                "e_dse1": e_dse1(p),
                "e_dse2": e_dse2(p),
            }
            row.update(terms)
            cavity_total = math.fsum(v for k, v in terms.items() if k != "e_vdw_proj")
            row["cavity_total"] = cavity_total
            row["total"] = baseline + cavity_total
            if spec.oracle_enabled:
                row["ed_total"] = ground_shift(
                    e_rot, tol=spec.oracle_tol, dimension_cap=spec.dimension_cap
                )
        except _POINT_ERRORS as exc:
            row["status"] = type(exc).__name__
            for c in columns:
                if c not in ("theta", "status"):
                    row.setdefault(c, float("nan"))
        rows.append(row)

    result = ScanResult(columns=columns, rows=rows)
    ok = [r for r in rows if r["status"] == "ok"]
    if ok:
        cross = [(abs(float(r["e_crw2"]) + float(r["e_dse2"])), float(r["theta"])) for r in ok]
        result.summary["theta_max_cross_term"] = max(cross)[1]
    return result


def _scaled_ensemble(e: Ensemble, lam: float) -> Ensemble:
    """Scale couplings jointly: g0 -> lam*g0 and mu -> sqrt(lam)*mu (so T -> lam*T)."""
    cavity = replace(e.cavity, g0=lam * e.cavity.g0)
    mols = tuple(
        Molecule(position=m.position, orientation=m.orientation,
                 mu=math.sqrt(lam) * m.mu, omega_m=m.omega_m)
        for m in e.molecules
    )
    return replace(e, molecules=mols, cavity=cavity)


def run_validation_suite(spec: ScanSpec) -> ScanResult:
    """Analytic total vs exact-diagonalization shift along a coupling-scale ladder.

    Each grid value lambda scales g -> lambda*g and T -> lambda*T; the residual
    |ED - analytic| is third order or higher, so halving lambda must shrink it
    by at least 2^3 (net of solver noise).  The summary reports the fitted
    decay exponents between successive points.
    """
    if spec.ensemble is None:
        raise ValidationError("validation suite requires an ensemble")
    if not spec.oracle_enabled:
        raise ValidationError("validation suite is meaningless without the oracle")

    columns = ["lam", "analytic_total", "ed_shift", "residual", "status"]
    rows: List[Dict[str, object]] = []
    for lam in spec.grid.values():
        row: Dict[str, object] = {"lam": float(lam), "status": "ok"}
        try:
            scaled = _scaled_ensemble(spec.ensemble, float(lam))
            analytic = total_breakdown(scaled, spec.convention, spec.pole_epsilon).total
            ed = ground_shift(scaled, tol=spec.oracle_tol, dimension_cap=spec.dimension_cap)
            row.update(analytic_total=analytic, ed_shift=ed, residual=abs(ed - analytic))
        except _POINT_ERRORS as exc:
            row["status"] = type(exc).__name__
            for c in columns:
                row.setdefault(c, float("nan"))
        rows.append(row)

    result = ScanResult(columns=columns, rows=rows)
    ok = [r for r in rows if r["status"] == "ok"]
    exponents = []
    for a, b in zip(ok, ok[1:]):
        la, lb = float(a["lam"]), float(b["lam"])
        ra, rb = float(a["residual"]), float(b["residual"])
        if ra > 0 and rb > 0 and la != lb:
            exponents.append(math.log(ra / rb) / math.log(la / lb))
    if exponents:
        result.summary["residual_decay_exponent_min"] = min(exponents)
        result.summary["residual_decay_exponent_mean"] = sum(exponents) / len(exponents)
    return result


SCAN_RUNNERS = {
    "detuning": run_detuning_scan,
    "density": run_density_scan,
    "slab": run_slab_scan,
    "alignment": run_alignment_scan,
    "validate": run_validation_suite,
}


def run_scan(spec: ScanSpec) -> ScanResult:
    return SCAN_RUNNERS[spec.kind](spec)
