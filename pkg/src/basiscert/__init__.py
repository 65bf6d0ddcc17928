"""Numerical certificates for truncated Schauder-type basis families:
basis and Grunblum constants, coefficient-functional norms, perturbation
equivalence, and gliding-hump subsequence selection, each cross-checked
against brute-force oracles."""

from .basis import (
    BasisSystem,
    CoefficientFunctionals,
    EtaAnalysis,
    GrunblumCertificate,
    coefficient_functionals,
    coefficients,
    eta_analysis,
    eta_value,
    grunblum_certificate,
    make_basis,
    partial_sum_norms,
    projection_norm,
    unconditional_constant,
)
from .errors import (
    BasisCertError,
    BvsFormatError,
    HypothesisError,
    IndependenceError,
    InputError,
    InsufficientCandidatesError,
    NullVectorError,
    NumericalError,
    NumericalInconsistencyError,
    RetriesExceededError,
    SelectionFailure,
    SpanError,
)
from .generators import FamilySpec, generate
from .norms import NormSpec, SampleConfig, dual_norm_value, l2, norm_value, sphere_sample
from .oracle import (
    OracleEstimate,
    brute_force_operator_norm,
    grid_ratio_max,
    sign_pattern_enumerate,
)
from .perturbation import (
    PerturbationCertificate,
    SandwichReport,
    perturbation_lambda,
    perturbed_constant_bound,
    sandwich_check,
)
from .selection import (
    BlockSequence,
    CandidateSequence,
    CoordinateNullReport,
    SelectionParams,
    SelectionResult,
    block_certify,
    coordinate_null_check,
    gliding_hump_select,
)

__version__ = "0.1.0"

_LAZY_ESTIMATORS = ("BasisExpansion", "GlidingHumpSelector", "PerturbationCertifier")


def __getattr__(name):
    # the estimator facade pulls in scikit-learn; load it on demand so the
    # CLI does not pay the import cost
    if name in _LAZY_ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
