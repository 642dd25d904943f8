"""Self-gravity of a massive scalar particle prepared in a two-site superposition.

The pipeline: physical scales and regime checks -> normalized wave packets ->
state-sourced metric perturbation (free-space constraint solve) -> coupling
integrals -> first-order two-mode dynamics and observables.  A CLI (`selfgrav`)
drives scenarios, parameter sweeps, field dumps, and a verification suite.
"""

from .config import ScenarioConfig, emit_config, load_config, parse_config
from .coupling import (
    CouplingSet,
    compute_couplings,
    compute_kA_minus,
    compute_kA_plus,
    compute_kB,
    extract_kappa,
    massless_decay,
)
from .dynamics import (
    ReducedState,
    TwoModeState,
    effective_unitary,
    evolve_main,
    initial_state,
    lindblad_rhs,
    probabilities,
    purity_entropy,
    reduce,
    reduced_hamiltonian,
)
from .errors import ConfigError, DomainError
from .gravity import (
    MetricPerturbation,
    SourceTag,
    assemble_metric,
    metric_for_state,
    solve_h00,
    stress_energy_source,
)
from .grids import GridSpec, ScalarGridField, default_grid, read_field, write_field
from .packets import OverlapReport, WavePacket, lr_overlap, make_packet, position_profile
from .pipeline import MetricBasis, SweepResult, build_metric_basis, run_sweep
from .scales import (
    PhysicalScales,
    RegimeReport,
    RegimeThresholds,
    check_regime,
    compute_scales,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CouplingSet",
    "DomainError",
    "GridSpec",
    "MetricBasis",
    "MetricPerturbation",
    "OverlapReport",
    "PhysicalScales",
    "ReducedState",
    "RegimeReport",
    "RegimeThresholds",
    "ScalarGridField",
    "ScenarioConfig",
    "SourceTag",
    "SweepResult",
    "TwoModeState",
    "WavePacket",
    "assemble_metric",
    "build_metric_basis",
    "check_regime",
    "compute_couplings",
    "compute_kA_minus",
    "compute_kA_plus",
    "compute_kB",
    "compute_scales",
    "default_grid",
    "effective_unitary",
    "emit_config",
    "evolve_main",
    "extract_kappa",
    "initial_state",
    "lindblad_rhs",
    "load_config",
    "lr_overlap",
    "make_packet",
    "massless_decay",
    "metric_for_state",
    "parse_config",
    "position_profile",
    "probabilities",
    "purity_entropy",
    "read_field",
    "reduce",
    "reduced_hamiltonian",
    "run_sweep",
    "solve_h00",
    "stress_energy_source",
    "write_field",
]
