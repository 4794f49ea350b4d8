"""Simulator of a relativistic four-component particle on a driven four-level
diamond system, with a full two-transmon superconducting-circuit realization.

The ideal model lives in :mod:`diracsim.dirac` (Hamiltonian construction,
bright/dark states, spin and helicity observables, Bell-basis factorization)
and :mod:`diracsim.evolve` (exact static propagation, convergence-controlled
chirped sweeps, pair-production probabilities). The circuit realization is in
:mod:`diracsim.circuit`. Named experiment scenarios with CSV/SVG output are
in :mod:`diracsim.scenarios`, exposed on the command line via
``diracsim run/list-scenarios/print-defaults/version``.
"""

from ._version import __version__
from .circuit import (
    CircuitParams,
    DressedBasis,
    DriveProgram,
    ToneSpec,
    build_bare_hamiltonian,
    build_drive_hamiltonian,
    dirac_drive_mapping,
    dressed_basis,
    drive_matrix_elements,
    evolve_circuit,
    project_to_diamond,
    to_rotating_frame,
)
from .dirac import (
    BrightStatePair,
    DiracParams,
    MINUS_01,
    MINUS_23,
    PLUS_01,
    PLUS_23,
    SphereSample,
    SpinVector,
    bell_transform,
    bright_states,
    build_dirac_hamiltonian,
    factored_check,
    helicity_operator,
    level_populations,
    manifold_spin,
    relativistic_energy,
    rotate_momentum_z,
    spin_operators,
    spin_rotation_z,
    spin_texture,
)
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateDrive,
    DegenerateSpectrum,
    InvalidInput,
    SimulationError,
    UnsupportedConfiguration,
)
from .evolve import (
    ChirpSchedule,
    TimeGrid,
    Trajectory,
    evolve_chirped,
    evolve_static,
    manifold_population,
    schwinger_probability,
)
from .linalg import (
    EigenDecomposition,
    eigh,
    expectation,
    kron,
    propagator,
)
from .report import (
    ResultBundle,
    svg_line_plot,
    svg_quiver_plot,
    write_csv,
    write_manifest,
)
from .scenarios import (
    SCENARIO_NAMES,
    ScenarioConfig,
    resolve_config,
    run_scenario,
    scenario_defaults,
)

__all__ = [
    "__version__",
    "BrightStatePair",
    "ChirpSchedule",
    "CircuitParams",
    "ConfigError",
    "ConvergenceFailure",
    "DegenerateDrive",
    "DegenerateSpectrum",
    "DiracParams",
    "DressedBasis",
    "DriveProgram",
    "EigenDecomposition",
    "InvalidInput",
    "MINUS_01",
    "MINUS_23",
    "PLUS_01",
    "PLUS_23",
    "ResultBundle",
    "SCENARIO_NAMES",
    "ScenarioConfig",
    "SimulationError",
    "SphereSample",
    "SpinVector",
    "TimeGrid",
    "ToneSpec",
    "Trajectory",
    "UnsupportedConfiguration",
    "bell_transform",
    "bright_states",
    "build_bare_hamiltonian",
    "build_dirac_hamiltonian",
    "build_drive_hamiltonian",
    "dirac_drive_mapping",
    "dressed_basis",
    "drive_matrix_elements",
    "eigh",
    "evolve_chirped",
    "evolve_circuit",
    "evolve_static",
    "expectation",
    "factored_check",
    "helicity_operator",
    "kron",
    "level_populations",
    "manifold_population",
    "manifold_spin",
    "project_to_diamond",
    "propagator",
    "relativistic_energy",
    "resolve_config",
    "rotate_momentum_z",
    "run_scenario",
    "scenario_defaults",
    "schwinger_probability",
    "spin_operators",
    "spin_rotation_z",
    "spin_texture",
    "svg_line_plot",
    "svg_quiver_plot",
    "to_rotating_frame",
    "write_csv",
    "write_manifest",
]
