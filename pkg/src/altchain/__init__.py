"""Ground-state pairwise entanglement in alternating spin chains.

Solvers (exact diagonalization, free fermions, DMRG) share a common
correlator interface; the entanglement module turns correlators into
two-site density matrices and Wootters concurrence; the sweep module runs
parameter scans and writes CSV/JSON.
"""

from .errors import (ConfigurationError, CapabilityError, SolverError,
                     NumericalIntegrityError)
from .model import (ModelParams, BondTable, TermList, build_couplings,
                    hamiltonian_terms, build_terms)
from .exact_diag import ground_state, low_spectrum, ExactDiagHandle
from .free_fermion import FreeFermionHandle
from .dmrg import (DmrgConfig, DmrgHandle, MPS, MPO, mpo_build,
                   dmrg_ground_state, mps_correlator, mps_magnetization,
                   save_checkpoint, load_checkpoint)
from .entanglement import (TwoSiteRDM, ConcurrenceResult, two_site_rdm,
                           concurrence, pair_concurrence)
from .sweep import (SweepSpec, SweepResult, run_sweep, emit, parse_csv,
                    preset, threshold_scan, validate_suite,
                    default_lambda_grid, resolve_pair)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "CapabilityError", "SolverError",
    "NumericalIntegrityError",
    "ModelParams", "BondTable", "TermList", "build_couplings",
    "hamiltonian_terms", "build_terms",
    "ground_state", "low_spectrum", "ExactDiagHandle",
    "FreeFermionHandle",
    "DmrgConfig", "DmrgHandle", "MPS", "MPO", "mpo_build",
    "dmrg_ground_state", "mps_correlator", "mps_magnetization",
    "save_checkpoint", "load_checkpoint",
    "TwoSiteRDM", "ConcurrenceResult", "two_site_rdm", "concurrence",
    "pair_concurrence",
    "SweepSpec", "SweepResult", "run_sweep", "emit", "parse_csv",
    "preset", "threshold_scan", "validate_suite", "default_lambda_grid",
    "resolve_pair",
]
