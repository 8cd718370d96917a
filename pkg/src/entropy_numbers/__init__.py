"""Certified brackets for entropy numbers of small operators on l_p spaces."""

from .approximation import (
    ConvergenceRecord,
    check_monotone,
    remark_counterexample,
    run_truncation_convergence,
)
from .bounds import delta, diagonal_sandwich, projection_entropy_lower, volume_lower_bound
from .covering import (
    Effort,
    EntropyBracket,
    entropy_bracket,
    exact_covering_refine,
    greedy_covering,
    packing_lower_bound,
)
from .geometry import Field, PointCloud, discretize_unit_ball, image_cloud
from .hilbert import HilbertIdentityReport, hilbert_identity_check
from .norms import NormBracket, operator_norm
from .operators import DenseOperator, DiagonalSpec, adjoint, modulus, polar, truncate

__version__ = "0.1.0"

__all__ = [
    "ConvergenceRecord",
    "DenseOperator",
    "DiagonalSpec",
    "Effort",
    "EntropyBracket",
    "Field",
    "HilbertIdentityReport",
    "NormBracket",
    "PointCloud",
    "adjoint",
    "check_monotone",
    "delta",
    "diagonal_sandwich",
    "discretize_unit_ball",
    "entropy_bracket",
    "exact_covering_refine",
    "greedy_covering",
    "hilbert_identity_check",
    "image_cloud",
    "modulus",
    "operator_norm",
    "packing_lower_bound",
    "polar",
    "projection_entropy_lower",
    "remark_counterexample",
    "run_truncation_convergence",
    "truncate",
    "volume_lower_bound",
]
