"""Coherent-classical estimation for linear quantum optical systems.

The package models linear quantum systems in the doubled annihilation/
creation form, verifies that given matrices describe a physically realizable
open harmonic oscillator, closes coherent feedback loops, and synthesizes the
optimal classical Kalman estimator for homodyne-detected outputs.  Scenario
runners reproduce the cavity and squeezer experiments: a passive cavity's
output carries no information about its internal mode (flat unit error
variance for every detector angle), while a squeezer used as a coherent
feedback controller beats the classical-only estimator, with the best
performance at the 135-degree quadrature.
"""

from .doubled import (
    DEFAULT_TOL,
    ComplexMatrix,
    DoubledMatrix,
    SignatureMatrix,
    adjoint,
    delta_blocks,
    delta_embed,
    inertia,
    is_delta_structured,
    matrix_from_json,
    matrix_to_json,
    signature_matrix,
    subsystem_permutation,
)
from .errors import (
    ChannelMismatch,
    CkeError,
    ConfigError,
    ControllerNotRealizable,
    IllConditioned,
    NoFeasibleCandidate,
    NoStabilizingSolution,
    NotHurwitz,
    SingularInnovation,
    SweepFailure,
    SynthesisError,
)
from .experiments import (
    AngleGrid,
    GridSearchResult,
    Scenario,
    SweepResult,
    SweepRow,
    build_augmented,
    builtin_scenario,
    emit,
    grid_search_controller,
    load_controller,
    load_plant,
    load_scenario,
    run_sweep,
)
from .homodyne import HomodyneScheme, quadrature_selector
from .interconnect import AugmentedSystem, classical_only, close_loop
from .qsystem import (
    CoherentController,
    InputChannel,
    NotRealizable,
    OutputChannel,
    PhysicalRealization,
    QuantumLinearSystem,
    RealizabilityFailure,
    build_beam_splitter_controller,
    build_cavity_plant,
    build_squeezer_controller,
    check_physical_realizability,
    is_bogoliubov,
    realize,
)
from .synthesis import (
    EstimatorSynthesis,
    RiccatiSolution,
    cost_via_joint_lyapunov,
    is_hurwitz,
    solve_filter_riccati,
    solve_lyapunov,
    synthesize_estimator,
)

__version__ = "0.1.0"

__all__ = [
    "AngleGrid",
    "AugmentedSystem",
    "ChannelMismatch",
    "CkeError",
    "CoherentController",
    "ComplexMatrix",
    "ConfigError",
    "ControllerNotRealizable",
    "DEFAULT_TOL",
    "DoubledMatrix",
    "EstimatorSynthesis",
    "GridSearchResult",
    "HomodyneScheme",
    "IllConditioned",
    "InputChannel",
    "NoFeasibleCandidate",
    "NoStabilizingSolution",
    "NotHurwitz",
    "NotRealizable",
    "OutputChannel",
    "PhysicalRealization",
    "QuantumLinearSystem",
    "RealizabilityFailure",
    "RiccatiSolution",
    "Scenario",
    "SignatureMatrix",
    "SingularInnovation",
    "SweepFailure",
    "SweepResult",
    "SweepRow",
    "SynthesisError",
    "adjoint",
    "build_augmented",
    "build_beam_splitter_controller",
    "build_cavity_plant",
    "build_squeezer_controller",
    "builtin_scenario",
    "check_physical_realizability",
    "classical_only",
    "close_loop",
    "cost_via_joint_lyapunov",
    "delta_blocks",
    "delta_embed",
    "emit",
    "grid_search_controller",
    "inertia",
    "is_bogoliubov",
    "is_delta_structured",
    "is_hurwitz",
    "load_controller",
    "load_plant",
    "load_scenario",
    "matrix_from_json",
    "matrix_to_json",
    "quadrature_selector",
    "realize",
    "run_sweep",
    "signature_matrix",
    "solve_filter_riccati",
    "solve_lyapunov",
    "subsystem_permutation",
    "synthesize_estimator",
]
