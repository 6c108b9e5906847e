"""Entanglement detection with local uncertainty relations (LURs).

Every separable state of two systems satisfies
``sum_i delta(A_i + B_i)^2 >= U_A + U_B`` where U_A, U_B are the
sum-uncertainty limits of the local observable sets; a violation proves
entanglement.
"""
from .config import DEFAULT_OPTIMIZER, DEFAULT_TOLERANCES, OptimizerConfig, Tolerances
from .errors import (
    ConsistencyError,
    DimMismatch,
    InvalidSpin,
    InvalidState,
    LURError,
    MissingSetting,
    NonConvergence,
    NormalizationError,
    NotHermitian,
    SchemaError,
    SpectrumMismatch,
)
from .ingest import MeasurementDataset, SettingRecord, empirical_variance, evaluate_from_data, parse, simulate
from .linalg import DensityMatrix, PureState, adjoint, eig_hermitian, expectation, tensor_product
from .lur import LURReport, LURSpec, builtin_spec, evaluate, joint_operator, min_over_product_states, werner_sweep
from .measures import concurrence, werner_concurrence
from .operators import ObservableSet, partner_operator, pauli_matrices, spin_matrices
from .states import (
    max_entangled,
    noise_model_state,
    random_pure,
    random_separable_mixture,
    singlet,
    spin1_xy_minimum_state,
    werner,
)
from .uncertainty import (
    UncertaintyBound,
    analytic_bound,
    minimize_sum_uncertainty,
    sum_uncertainty,
    variance,
)

__version__ = "0.1.0"
