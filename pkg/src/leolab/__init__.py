"""Leakage elimination toolkit.

Build codes, classify couplings into logical, outside, and leakage parts,
synthesize parity-kick pulses whose action is -1 on the code and +1 on its
complement, and simulate how pulsed evolution suppresses leakage relative
to free evolution.
"""

from .classify import (
    CLASS_LEAKAGE,
    CLASS_LOGICAL,
    CLASS_MIXED,
    CLASS_OUTSIDE,
    BlockDecomposition,
    PauliClassification,
    classification_to_csv,
    classify_pauli_strings,
    decompose,
    leakage_norm,
)
from .codes import (
    CodeSubspace,
    SpinSector,
    SpinSectorDecomposition,
    bare_qubit_code,
    build_code,
    code_from_json,
    code_labels,
    code_to_json,
    collective_spin,
    dfs2_dephasing,
    dfs3_collective,
    dfs4_collective,
    dual_rail_code,
    lift_quadratic,
    occupation_index,
    s_squared,
    spin_multiplicity,
    spin_sector_decomposition,
    two_photon_occupations,
)
from .dynamics import (
    ParityKickSchedule,
    SimulationReport,
    SimulationSample,
    SweepRow,
    SweepTable,
    decoupled_limit_unitary,
    parity_kick_unitary,
    simulate,
    sweep_cycles,
)
from .leo import (
    ROUTES,
    LeakageEliminationOperator,
    LeoVerification,
    NotGeneralizedGeneratorError,
    NotLogicalInvolutionError,
    ProbeCheck,
    canonical_leo,
    exchange_dfs2_leo,
    extract_phase,
    generalized_leo,
    leo_from_json,
    leo_to_json,
    number_operator_leo,
    phase_shifter_leo,
    projector_leo,
    random_probes,
    reference_reflection,
    s_squared_leo,
    verify_leo,
)
from .models import (
    ExchangeCouplings,
    LogicalOps,
    PairCoupling,
    SystemBathModel,
    dfs2_leakage_model,
    exchange_hamiltonian,
    hopping_model,
    linear_optics_model,
    logical_ops_dfs2,
    model_from_config,
    recoupled_y_rotation,
)
from .opalg import (
    DimensionMismatchError,
    NumericalDegeneracyError,
    Operator,
    anticommutator,
    commutator,
    derived_seeds,
    hermitian_exponential,
    identity,
    op_norm,
    operator_from_json,
    operator_to_json,
    pauli_on,
    pauli_string,
    random_hermitian,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "CLASS_LEAKAGE",
    "CLASS_LOGICAL",
    "CLASS_MIXED",
    "CLASS_OUTSIDE",
    "CodeSubspace",
    "DimensionMismatchError",
    "ExchangeCouplings",
    "LeakageEliminationOperator",
    "LeoVerification",
    "LogicalOps",
    "NotGeneralizedGeneratorError",
    "NotLogicalInvolutionError",
    "NumericalDegeneracyError",
    "Operator",
    "PairCoupling",
    "ParityKickSchedule",
    "PauliClassification",
    "ProbeCheck",
    "ROUTES",
    "SimulationReport",
    "SimulationSample",
    "SpinSector",
    "SpinSectorDecomposition",
    "SweepRow",
    "SweepTable",
    "SystemBathModel",
    "anticommutator",
    "bare_qubit_code",
    "build_code",
    "canonical_leo",
    "classification_to_csv",
    "classify_pauli_strings",
    "code_from_json",
    "code_labels",
    "code_to_json",
    "collective_spin",
    "commutator",
    "decompose",
    "decoupled_limit_unitary",
    "derived_seeds",
    "dfs2_dephasing",
    "dfs2_leakage_model",
    "dfs3_collective",
    "dfs4_collective",
    "dual_rail_code",
    "exchange_dfs2_leo",
    "exchange_hamiltonian",
    "extract_phase",
    "generalized_leo",
    "hermitian_exponential",
    "hopping_model",
    "identity",
    "leakage_norm",
    "leo_from_json",
    "leo_to_json",
    "lift_quadratic",
    "linear_optics_model",
    "logical_ops_dfs2",
    "model_from_config",
    "number_operator_leo",
    "occupation_index",
    "op_norm",
    "operator_from_json",
    "operator_to_json",
    "parity_kick_unitary",
    "pauli_on",
    "pauli_string",
    "phase_shifter_leo",
    "projector_leo",
    "random_hermitian",
    "random_probes",
    "recoupled_y_rotation",
    "reference_reflection",
    "s_squared",
    "s_squared_leo",
    "simulate",
    "spin_multiplicity",
    "spin_sector_decomposition",
    "sweep_cycles",
    "tensor",
    "two_photon_occupations",
    "verify_leo",
]
