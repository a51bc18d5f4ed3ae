"""Declarative run configuration: strict JSON schema, parser, and renderer.

The config is plain JSON with a fixed key set; unknown keys are rejected so a
misspelled physics parameter can never be silently ignored.  `parse_config`
and `render_config` round-trip exactly: parse_config(render_config(c)) == c.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Optional, Tuple

from .errors import ParseError, ValidationError
from .geometry import SlabSpec, make_chain, make_random_gas, make_slab_with_probe
from .model import CavityParams, Ensemble, Molecule
from .perturbation import DEFAULT_POLE_EPSILON, ThreeBodySumConvention
from .scans import SCAN_KINDS, GridSpec, ScanSpec

DEFAULT_PHOTON_CUTOFF = 6
DEFAULT_SOLVER_TOL = 1e-10
DEFAULT_DIMENSION_CAP = 20000

Vec3 = Tuple[float, float, float]


@dataclass(frozen=True)
class CavityConfig:
    omega_c: float
    g0: float
    photon_cutoff: int = DEFAULT_PHOTON_CUTOFF


@dataclass(frozen=True)
class MoleculeConfig:
    position: Vec3
    orientation: Vec3 = (0.0, 0.0, 1.0)
    mu: float = 1.0
    omega_m: float = 1.0


@dataclass(frozen=True)
class EnsembleConfig:
    molecules: Tuple[MoleculeConfig, ...]
    polarization_axis: Vec3 = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str  # chain | random_gas | slab
    n: Optional[int] = None
    spacing: float = 1.0
    orientation: Vec3 = (0.0, 0.0, 1.0)
    random_orientations: bool = False
    box_side: Optional[float] = None
    min_separation: Optional[float] = None
    lattice_constant: Optional[float] = None
    half_width: Optional[int] = None
    z0: Optional[float] = None
    mu: float = 1.0
    omega_m: float = 1.0
    polarization_axis: Vec3 = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GridConfig:
    start: float
    stop: float
    points: int
    scale: str = "linear"


@dataclass(frozen=True)
class ScanConfig:
    kind: str
    grid: GridConfig
    oracle: bool = False
    include_i_equals_k: bool = True
    kernel: str = "radial"
    rotate_positions: bool = False


@dataclass(frozen=True)
class TolerancesConfig:
    pole_epsilon: float = DEFAULT_POLE_EPSILON
    solver_tol: float = DEFAULT_SOLVER_TOL
    dimension_cap: int = DEFAULT_DIMENSION_CAP


@dataclass(frozen=True)
class RunConfig:
    cavity: CavityConfig
    ensemble: Optional[EnsembleConfig] = None
    generator: Optional[GeneratorConfig] = None
    scan: Optional[ScanConfig] = None
    output: Optional[str] = None
    seed: int = 0
    tolerances: TolerancesConfig = field(default_factory=TolerancesConfig)

    def build_ensemble(self) -> Ensemble:
        """Materialize the configured ensemble (explicit molecules or generator)."""
        cavity = CavityParams(
            omega_c=self.cavity.omega_c, g0=self.cavity.g0, photon_cutoff=self.cavity.photon_cutoff
        )
        if self.ensemble is not None:
            mols = tuple(
                Molecule(position=m.position, orientation=m.orientation, mu=m.mu, omega_m=m.omega_m)
                for m in self.ensemble.molecules
            )
            return Ensemble(
                molecules=mols, cavity=cavity, polarization_axis=self.ensemble.polarization_axis
            )
        g = self.generator
        assert g is not None  # guaranteed by parse-time validation
        if g.kind == "chain":
            return make_chain(
                g.n, g.spacing, g.orientation, mu=g.mu, omega_m=g.omega_m,
                cavity=cavity, polarization_axis=g.polarization_axis,
            )
        if g.kind == "random_gas":
            return make_random_gas(
                g.n, g.box_side, self.seed, min_separation=g.min_separation,
                orientation="random" if g.random_orientations else g.orientation,
                mu=g.mu, omega_m=g.omega_m, cavity=cavity,
                polarization_axis=g.polarization_axis,
            )
        return make_slab_with_probe(
            SlabSpec(lattice_constant=g.lattice_constant, half_width=g.half_width, z0=g.z0),
            orientation=g.orientation, mu=g.mu, omega_m=g.omega_m,
            cavity=cavity, polarization_axis=g.polarization_axis,
        )

    def build_scan_spec(self) -> ScanSpec:
        if self.scan is None:
            raise ValidationError("config has no scan section")
        s = self.scan
        grid = GridSpec(start=s.grid.start, stop=s.grid.stop, points=s.grid.points, scale=s.grid.scale)
        ensemble = None
        slab = None
        slab_mu = 1.0
        chain_spacing = 1.0
        if s.kind == "slab":
            g = self.generator
            if g is None or g.kind != "slab":
                raise ValidationError("slab scan requires a generator of kind 'slab'")
            slab = SlabSpec(lattice_constant=g.lattice_constant, half_width=g.half_width, z0=g.z0)
            slab_mu = g.mu
        else:
            ensemble = self.build_ensemble()
            if self.generator is not None:
                chain_spacing = self.generator.spacing
        return ScanSpec(
            kind=s.kind,
            grid=grid,
            ensemble=ensemble,
            slab=slab,
            slab_mu=slab_mu,
            chain_spacing=chain_spacing,
            oracle_enabled=s.oracle,
            convention=ThreeBodySumConvention(include_i_equals_k=s.include_i_equals_k),
            pole_epsilon=self.tolerances.pole_epsilon,
            oracle_tol=self.tolerances.solver_tol,
            dimension_cap=self.tolerances.dimension_cap,
            slab_kernel=s.kernel,
            rotate_positions=s.rotate_positions,
            seed=self.seed,
        )


def _expect_mapping(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ParseError(f"{path}: expected an object, got {type(node).__name__}")
    return node


def _reject_unknown(node: dict, allowed: set, path: str) -> None:
    for key in node:
        if key not in allowed:
            raise ParseError(f"unknown key at {path}.{key}" if path else f"unknown key {key}")


def _get_number(node: dict, key: str, path: str, *, default=None, required=False) -> Optional[float]:
    if key not in node:
        if required:
            raise ParseError(f"{path}.{key} is required")
        return default
    v = node[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{path}.{key}: expected a number, got {type(v).__name__}")
    return float(v)


def _get_int(node: dict, key: str, path: str, *, default=None, required=False) -> Optional[int]:
    if key not in node:
        if required:
            raise ParseError(f"{path}.{key} is required")
        return default
    v = node[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{path}.{key}: expected an integer, got {type(v).__name__}")
    return v


def _get_bool(node: dict, key: str, path: str, *, default=False) -> bool:
    v = node.get(key, default)
    if not isinstance(v, bool):
        raise ParseError(f"{path}.{key}: expected a boolean, got {type(v).__name__}")
    return v


def _get_str(node: dict, key: str, path: str, *, default=None, required=False) -> Optional[str]:
    if key not in node:
        if required:
            raise ParseError(f"{path}.{key} is required")
        return default
    v = node[key]
    if not isinstance(v, str):
        raise ParseError(f"{path}.{key}: expected a string, got {type(v).__name__}")
    return v


def _get_vec3(node: dict, key: str, path: str, *, default=None) -> Vec3:
    if key not in node:
        return default
    v = node[key]
    if (not isinstance(v, (list, tuple)) or len(v) != 3
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)):
        raise ParseError(f"{path}.{key}: expected a 3-vector of numbers")
    return (float(v[0]), float(v[1]), float(v[2]))


def _positive(value: float, path: str) -> float:
    if not value > 0:
        raise ValidationError(f"{path} must be > 0, got {value!r}")
    return value


def _parse_cavity(node, path="cavity") -> CavityConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(node, {"omega_c", "g0", "photon_cutoff"}, path)
    omega_c = _positive(_get_number(node, "omega_c", path, required=True), f"{path}.omega_c")
    g0 = _get_number(node, "g0", path, required=True)
    if g0 < 0:
        raise ValidationError(f"{path}.g0 must be >= 0, got {g0!r}")
    cutoff = _get_int(node, "photon_cutoff", path, default=DEFAULT_PHOTON_CUTOFF)
    if cutoff < 1:
        raise ValidationError(f"{path}.photon_cutoff must be >= 1, got {cutoff!r}")
    return CavityConfig(omega_c=omega_c, g0=g0, photon_cutoff=cutoff)


def _parse_molecule(node, path: str) -> MoleculeConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(node, {"position", "orientation", "mu", "omega_m"}, path)
    if "position" not in node:
        raise ParseError(f"{path}.position is required")
    position = _get_vec3(node, "position", path)
    orientation = _get_vec3(node, "orientation", path, default=(0.0, 0.0, 1.0))
    mu = _get_number(node, "mu", path, default=1.0)
    if mu < 0:
        raise ValidationError(f"{path}.mu must be >= 0, got {mu!r}")
    omega_m = _get_number(node, "omega_m", path, default=1.0)
    _positive(omega_m, f"{path}.omega_m")
    return MoleculeConfig(position=position, orientation=orientation, mu=mu, omega_m=omega_m)


def _parse_ensemble(node, path="ensemble") -> EnsembleConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(node, {"molecules", "polarization_axis"}, path)
    raw = node.get("molecules")
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{path}.molecules must be a non-empty list")
    mols = tuple(_parse_molecule(m, f"{path}.molecules[{i}]") for i, m in enumerate(raw))
    axis = _get_vec3(node, "polarization_axis", path, default=(0.0, 0.0, 1.0))
    return EnsembleConfig(molecules=mols, polarization_axis=axis)


def _parse_generator(node, path="generator") -> GeneratorConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(
        node,
        {"kind", "n", "spacing", "orientation", "random_orientations", "box_side",
         "min_separation", "lattice_constant", "half_width", "z0", "mu", "omega_m",
         "polarization_axis"},
        path,
    )
    kind = _get_str(node, "kind", path, required=True)
    if kind not in ("chain", "random_gas", "slab"):
        raise ValidationError(f"{path}.kind must be chain|random_gas|slab, got {kind!r}")
    cfg = GeneratorConfig(
        kind=kind,
        n=_get_int(node, "n", path),
        spacing=_get_number(node, "spacing", path, default=1.0),
        orientation=_get_vec3(node, "orientation", path, default=(0.0, 0.0, 1.0)),
        random_orientations=_get_bool(node, "random_orientations", path, default=False),
        box_side=_get_number(node, "box_side", path),
        min_separation=_get_number(node, "min_separation", path),
        lattice_constant=_get_number(node, "lattice_constant", path),
        half_width=_get_int(node, "half_width", path),
        z0=_get_number(node, "z0", path),
        mu=_get_number(node, "mu", path, default=1.0),
        omega_m=_get_number(node, "omega_m", path, default=1.0),
        polarization_axis=_get_vec3(node, "polarization_axis", path, default=(0.0, 0.0, 1.0)),
    )
    if kind in ("chain", "random_gas"):
        if cfg.n is None or cfg.n < 1:
            raise ValidationError(f"{path}.n must be >= 1 for kind {kind!r}")
        if kind == "chain":
            _positive(cfg.spacing, f"{path}.spacing")
        else:
            if cfg.box_side is None:
                raise ParseError(f"{path}.box_side is required for random_gas")
            _positive(cfg.box_side, f"{path}.box_side")
    else:
        for key in ("lattice_constant", "half_width", "z0"):
            if getattr(cfg, key) is None:
                raise ParseError(f"{path}.{key} is required for slab")
        _positive(cfg.lattice_constant, f"{path}.lattice_constant")
        _positive(cfg.z0, f"{path}.z0")
        if cfg.half_width < 1:
            raise ValidationError(f"{path}.half_width must be >= 1")
    _positive(cfg.omega_m, f"{path}.omega_m")
    if cfg.mu < 0:
        raise ValidationError(f"{path}.mu must be >= 0")
    return cfg


def _parse_scan(node, path="scan") -> ScanConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(
        node, {"kind", "grid", "oracle", "include_i_equals_k", "kernel", "rotate_positions"}, path
    )
    kind = _get_str(node, "kind", path, required=True)
    if kind not in SCAN_KINDS:
        raise ValidationError(f"{path}.kind must be one of {SCAN_KINDS}, got {kind!r}")
    gnode = _expect_mapping(node.get("grid"), f"{path}.grid")
    _reject_unknown(gnode, {"start", "stop", "points", "scale"}, f"{path}.grid")
    grid = GridConfig(
        start=_get_number(gnode, "start", f"{path}.grid", required=True),
        stop=_get_number(gnode, "stop", f"{path}.grid", required=True),
        points=_get_int(gnode, "points", f"{path}.grid", required=True),
        scale=_get_str(gnode, "scale", f"{path}.grid", default="linear"),
    )
    if grid.points < 2:
        raise ValidationError(f"{path}.grid.points must be >= 2, got {grid.points!r}")
    if grid.scale not in ("linear", "log"):
        raise ValidationError(f"{path}.grid.scale must be linear|log, got {grid.scale!r}")
    kernel = _get_str(node, "kernel", path, default="radial")
    if kernel not in ("radial", "projected"):
        raise ValidationError(f"{path}.kernel must be radial|projected, got {kernel!r}")
    return ScanConfig(
        kind=kind,
        grid=grid,
        oracle=_get_bool(node, "oracle", path, default=False),
        include_i_equals_k=_get_bool(node, "include_i_equals_k", path, default=True),
        kernel=kernel,
        rotate_positions=_get_bool(node, "rotate_positions", path, default=False),
    )


def _parse_tolerances(node, path="tolerances") -> TolerancesConfig:
    node = _expect_mapping(node, path)
    _reject_unknown(node, {"pole_epsilon", "solver_tol", "dimension_cap"}, path)
    eps = _get_number(node, "pole_epsilon", path, default=DEFAULT_POLE_EPSILON)
    if not 0 < eps < 1:
        raise ValidationError(f"{path}.pole_epsilon must be in (0, 1), got {eps!r}")
    tol = _get_number(node, "solver_tol", path, default=DEFAULT_SOLVER_TOL)
    _positive(tol, f"{path}.solver_tol")
    cap = _get_int(node, "dimension_cap", path, default=DEFAULT_DIMENSION_CAP)
    if cap < 2:
        raise ValidationError(f"{path}.dimension_cap must be >= 2, got {cap!r}")
    return TolerancesConfig(pole_epsilon=eps, solver_tol=tol, dimension_cap=cap)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config; errors name the offending field."""
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    root = _expect_mapping(root, "<root>")
    _reject_unknown(
        root, {"cavity", "ensemble", "generator", "scan", "output", "seed", "tolerances"}, ""
    )
    if "cavity" not in root:
        raise ParseError("cavity section is required")
    cavity = _parse_cavity(root["cavity"])
    ensemble = _parse_ensemble(root["ensemble"]) if "ensemble" in root else None
    generator = _parse_generator(root["generator"]) if "generator" in root else None
    if ensemble is not None and generator is not None:
        raise ValidationError("config must define either ensemble or generator, not both")
    if ensemble is None and generator is None:
        raise ParseError("config needs an ensemble or a generator section")
    scan = _parse_scan(root["scan"]) if "scan" in root else None
    output = _get_str(root, "output", "")
    seed = _get_int(root, "seed", "", default=0)
    if seed < 0:
        raise ValidationError(f"seed must be >= 0, got {seed!r}")
    tolerances = (
        _parse_tolerances(root["tolerances"]) if "tolerances" in root else TolerancesConfig()
    )
    return RunConfig(
        cavity=cavity, ensemble=ensemble, generator=generator, scan=scan,
        output=output, seed=seed, tolerances=tolerances,
    )


def render_config(cfg: RunConfig) -> str:
    """Canonical JSON text for a RunConfig; parse_config(render_config(c)) == c."""
    root: dict = {
        "cavity": {
            "omega_c": cfg.cavity.omega_c,
            "g0": cfg.cavity.g0,
            "photon_cutoff": cfg.cavity.photon_cutoff,
        }
    }
    if cfg.ensemble is not None:
        root["ensemble"] = {
            "molecules": [
                {
                    "position": list(m.position),
                    "orientation": list(m.orientation),
                    "mu": m.mu,
                    "omega_m": m.omega_m,
                }
                for m in cfg.ensemble.molecules
            ],
            "polarization_axis": list(cfg.ensemble.polarization_axis),
        }
    if cfg.generator is not None:
        g = cfg.generator
        node = {"kind": g.kind, "spacing": g.spacing, "orientation": list(g.orientation),
                "random_orientations": g.random_orientations, "mu": g.mu, "omega_m": g.omega_m,
                "polarization_axis": list(g.polarization_axis)}
        for key in ("n", "box_side", "min_separation", "lattice_constant", "half_width", "z0"):
            value = getattr(g, key)
            if value is not None:
                node[key] = value
        root["generator"] = node
    if cfg.scan is not None:
        s = cfg.scan
        root["scan"] = {
            "kind": s.kind,
            "grid": {"start": s.grid.start, "stop": s.grid.stop,
                     "points": s.grid.points, "scale": s.grid.scale},
            "oracle": s.oracle,
            "include_i_equals_k": s.include_i_equals_k,
            "kernel": s.kernel,
            "rotate_positions": s.rotate_positions,
        }
    if cfg.output is not None:
        root["output"] = cfg.output
    root["seed"] = cfg.seed
    root["tolerances"] = {
        "pole_epsilon": cfg.tolerances.pole_epsilon,
        "solver_tol": cfg.tolerances.solver_tol,
        "dimension_cap": cfg.tolerances.dimension_cap,
    }
    return json.dumps(root, indent=2) + "\n"
