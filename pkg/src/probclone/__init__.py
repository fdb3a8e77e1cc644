"""Probabilistic quantum cloning and state-identification machines.

Given a linearly independent family of pure states and per-state target
success probabilities, this package synthesizes the exact unitary of a
probabilistic cloning or identification machine, the Hamiltonian that
generates it, and a gate-level network built from two-body reflections
and multi-controlled rotations.  An exact state-vector simulator with
probe post-selection verifies every construction, and an error-injection
Monte Carlo probes robustness to decoherence and preparation errors.
"""

from .errors import (
    ConvergenceError,
    DegenerateError,
    DimensionError,
    DomainError,
    InvariantError,
    ModeError,
    NotPSDError,
    ProbcloneError,
    RankError,
    ShapeError,
    SingularError,
    SizeError,
    SymmetryError,
    UnitarityError,
)
from .statesets import StateSet, TriangularForm, gram, symmetric_pair, triangularize
from .synthesis import (
    Clone,
    Feasibility,
    HamiltonianSpec,
    Identify,
    MachineSpec,
    SynthesisResult,
    build_unitary,
    coefficients,
    diagonalize,
    feasibility,
    hamiltonian,
    optimal_uniform_gamma,
    residual_matrix,
)
from .circuit import (
    Circuit,
    CNot,
    MultiControlled,
    PauliX,
    Phase,
    Single,
    TwoLevel,
    compile_unitary,
    from_text,
    gate_stats,
    lift_two_level,
    lower_multicontrolled,
    to_text,
    two_level_decompose,
    with_controls,
)
from .dgate import ChainStage, DGateSpec, controlled_d, d_chain, d_multi, d_multi_chain, d_single
from .sim import (
    Decoherence,
    MachineCircuit,
    Preparation,
    SimOutcome,
    StateVector,
    apply,
    assemble,
    identify_measure,
    machine_input,
    measure_probe,
    product_state,
    robustness_run,
    simulate,
)
from .kernels import BACKEND, available_backends

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChainStage",
    "Circuit",
    "Clone",
    "CNot",
    "ConvergenceError",
    "Decoherence",
    "DegenerateError",
    "DGateSpec",
    "DimensionError",
    "DomainError",
    "Feasibility",
    "HamiltonianSpec",
    "Identify",
    "InvariantError",
    "MachineCircuit",
    "MachineSpec",
    "ModeError",
    "MultiControlled",
    "NotPSDError",
    "PauliX",
    "Phase",
    "Preparation",
    "ProbcloneError",
    "RankError",
    "ShapeError",
    "SimOutcome",
    "Single",
    "SingularError",
    "SizeError",
    "StateSet",
    "StateVector",
    "SymmetryError",
    "SynthesisResult",
    "TriangularForm",
    "TwoLevel",
    "UnitarityError",
    "apply",
    "assemble",
    "available_backends",
    "build_unitary",
    "coefficients",
    "compile_unitary",
    "controlled_d",
    "d_chain",
    "d_multi",
    "d_multi_chain",
    "d_single",
    "diagonalize",
    "feasibility",
    "from_text",
    "gate_stats",
    "gram",
    "hamiltonian",
    "identify_measure",
    "lift_two_level",
    "lower_multicontrolled",
    "machine_input",
    "measure_probe",
    "optimal_uniform_gamma",
    "product_state",
    "residual_matrix",
    "robustness_run",
    "simulate",
    "symmetric_pair",
    "to_text",
    "triangularize",
    "two_level_decompose",
    "with_controls",
]
