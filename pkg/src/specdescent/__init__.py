"""Condition numbers of random and kernel matrices.

Seedable matrix/cloud generation, a Jacobi-based spectral toolkit
(SVD, operator norm, condition number, pseudoinverse, min-norm solve),
closed-form Marchenko-Pastur predictions, kernel Gram construction with
linear-equivalent approximation, and a Monte Carlo sweep engine that
traces the condition number across the aspect ratio n/d.
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .errors import (CapabilityError, ConvergenceError, DomainError,
                     NumericalError, SizeError, SpecdescentError)
from .experiments import (AggregateRow, AmplificationReport, EdgeCheckResult,
                          Ensemble, SweepConfig, SweepRecord, aggregate,
                          detect_peak, edge_check, error_amplification,
                          log_grid, run_sweep)
from .kernels import (KernelSpec, LinearizedKernel, ScalarFunction,
                      dot_kernel_matrix, el_karoui_linearize,
                      radial_kernel_matrix)
from .mp_theory import (MPPrediction, mp_edges, predict,
                        predicted_condition_number, square_case_min_sv)
from .randmat import (MAX_ELEMENTS, Seed, gaussian_cloud, gaussian_matrix,
                      rademacher_matrix)
from .spectral import (SolveResult, SpectralDecomposition, condition_number,
                       min_norm_solve, operator_norm, pseudoinverse, svd)

__all__ = [
    "AggregateRow", "AmplificationReport", "BACKEND", "CapabilityError",
    "ConvergenceError", "DomainError", "EdgeCheckResult", "Ensemble",
    "KernelSpec", "LinearizedKernel", "MAX_ELEMENTS", "MPPrediction",
    "NumericalError", "ScalarFunction", "Seed", "SizeError", "SolveResult",
    "SpecdescentError", "SpectralDecomposition", "SweepConfig", "SweepRecord",
    "aggregate", "condition_number", "detect_peak", "dot_kernel_matrix",
    "edge_check", "el_karoui_linearize", "error_amplification",
    "gaussian_cloud", "gaussian_matrix", "log_grid", "min_norm_solve",
    "mp_edges", "operator_norm", "predict", "predicted_condition_number",
    "pseudoinverse", "rademacher_matrix", "radial_kernel_matrix", "run_sweep",
    "square_case_min_sv", "svd", "__version__",
]
