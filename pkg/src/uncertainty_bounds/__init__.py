"""Strengthened forward and reverse uncertainty bounds on variance sums.

Bounds on ``dA^2 + dB^2`` (and on ``sum_j dA_j^2`` for several observables)
built from refined triangle inequalities applied to deviation vectors
``(A - <A>)|psi>``.
"""

from .bounds2 import (
    BaselineBounds,
    BoundPairSet,
    CombinedBound,
    baselines,
    combined,
    construct_orthogonal,
    evaluate_families,
    family1,
    family2,
    family3,
    family4,
    maccone_pati,
    reverse_cov,
    robertson,
    schrodinger,
)
from .errors import (
    DegenerateVariance,
    DimensionMismatch,
    NotHermitian,
    NotOrthogonal,
    NumericalError,
    SingularDenominator,
    UncertaintyError,
)
from .geometry import angular_distance, kato_sandwich, maligranda_sandwich
from .hilbert import (
    Observable,
    PureState,
    commutator_expectation,
    covariance,
    deviation_vector,
    expectation,
    gram_schmidt_orthogonalize,
    moments,
    non_hermitian_deviation_norm,
    normalize,
    orthogonality_check,
    variance,
)
from .multi import MultiObsSpec, multi_bounds, multi_bounds_orthogonal, tightest_coefficients
from .systems import analytic_moments, build, matrix_vs_analytic

__version__ = "0.1.0"

__all__ = [
    "BaselineBounds",
    "BoundPairSet",
    "CombinedBound",
    "DegenerateVariance",
    "DimensionMismatch",
    "MultiObsSpec",
    "NotHermitian",
    "NotOrthogonal",
    "NumericalError",
    "Observable",
    "PureState",
    "SingularDenominator",
    "UncertaintyError",
    "analytic_moments",
    "angular_distance",
    "baselines",
    "build",
    "combined",
    "commutator_expectation",
    "construct_orthogonal",
    "covariance",
    "deviation_vector",
    "evaluate_families",
    "expectation",
    "family1",
    "family2",
    "family3",
    "family4",
    "gram_schmidt_orthogonalize",
    "kato_sandwich",
    "maccone_pati",
    "maligranda_sandwich",
    "matrix_vs_analytic",
    "moments",
    "multi_bounds",
    "multi_bounds_orthogonal",
    "non_hermitian_deviation_norm",
    "normalize",
    "orthogonality_check",
    "reverse_cov",
    "robertson",
    "schrodinger",
    "tightest_coefficients",
    "variance",
]
