"""Cavity-modified van der Waals interactions.

Closed-form second-order energy contributions for an ensemble of two-level
molecules coupled to a single cavity mode, an exact-diagonalization oracle on
the truncated spin x Fock space, deterministic parameter scans, and a CLI.
"""

from .errors import (
    CavityVdwError,
    DegenerateGeometry,
    DimensionTooLarge,
    MalformedSummary,
    MissingColumn,
    NoConvergence,
    NonPositiveEnergy,
    NonUniformEnsemble,
    NonUnitOrientation,
    NotResonant,
    ParseError,
    PerturbativeBreakdown,
    ValidationError,
)
from .model import (
    CavityParams,
    CouplingMatrix,
    EnergyBreakdown,
    Ensemble,
    HamiltonianSpec,
    Molecule,
    effective_rabi,
    validate_ensemble,
)
from .geometry import (
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
from .perturbation import (
    PerturbationInputs,
    ThreeBodySumConvention,
    collective_prefactor,
    crossover_detuning,
    de_p1,
    de_p2,
    de_p2_detuned,
    e_crw1,
    e_crw2,
    e_dse1,
    e_dse2,
    e_vdw,
    three_body_sum,
    total_breakdown,
)
from .oracle import (
    GroundStateResult,
    HilbertSpace,
    build_hamiltonian,
    converged_ground_energy,
    ground_energy,
    ground_shift,
    isolate_term,
)
from .scans import (
    GridSpec,
    ScanResult,
    ScanSpec,
    bisect_root,
    fit_loglog_slope,
    run_alignment_scan,
    run_density_scan,
    run_detuning_scan,
    run_scan,
    run_slab_scan,
    run_validation_suite,
)
from .config import RunConfig, parse_config, render_config
from .csvio import read_scan_csv, render_scan_csv, write_scan_csv

__version__ = "0.1.0"
