"""Closed-form Marchenko-Pastur predictions.

Spectral support edges of the normalized Gram matrix of an n-by-d
matrix with i.i.d. mean-zero unit-variance entries, as a function of the
aspect ratio gamma = n/d, plus the condition number they imply and the
finite-size smallest-singular-value scale of the square case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# aspect ratios this close to 1 are reported as the square regime
SQUARE_REGIME_ATOL = 1e-12


@dataclass(frozen=True)
class MPPrediction:
    """Theoretical edges and condition number at one aspect ratio."""

    gamma: float
    lower_edge: float
    upper_edge: float
    predicted_kappa: float
    regime: str  # "wide" (gamma<1), "square", or "tall" (gamma>1)


def mp_edges(gamma: float) -> tuple[float, float]:
    """Support edges of the normalized Gram spectrum at aspect ratio gamma.

    For gamma <= 1 these are the extreme eigenvalues of (1/d) A A^T,
    ((1-sqrt(gamma))^2, (1+sqrt(gamma))^2); for gamma > 1 the same
    formulas with 1/gamma apply to (1/n) A^T A. The two regimes coincide
    under gamma <-> 1/gamma.
    """
    gamma = float(gamma)
    if not gamma > 0 or math.isinf(gamma):
        raise DomainError(f"gamma must be a positive real, got {gamma}")
    g = min(gamma, 1.0 / gamma)
    root = math.sqrt(g)
    return (1.0 - root) ** 2, (1.0 + root) ** 2


def predicted_condition_number(gamma: float) -> float:
    """Asymptotic condition number (1+sqrt(g))/(1-sqrt(g)), g = min(gamma, 1/gamma).

    Equals the square root of the Gram edge ratio, since the edges live on
    the squared-singular-value scale; +inf at gamma = 1 where the lower
    edge closes.
    """
    lower, upper = mp_edges(gamma)
    if lower <= 0.0:
        return float("inf")
    return math.sqrt(upper / lower)


def predict(gamma: float) -> MPPrediction:
    """Bundle edges, condition number and regime label for one gamma."""
    lower, upper = mp_edges(gamma)
    gamma = float(gamma)
    if abs(gamma - 1.0) <= SQUARE_REGIME_ATOL:
        regime = "square"
    elif gamma < 1.0:
        regime = "wide"
    else:
        regime = "tall"
    return MPPrediction(gamma=gamma, lower_edge=lower, upper_edge=upper,
                        predicted_kappa=predicted_condition_number(gamma),
                        regime=regime)


def square_case_min_sv(n: int, d: int) -> float:
    """Finite-size scale of the smallest Gram eigenvalue near the square case.

    Returns min(1/n, 1/d) * max(sqrt(n)-sqrt(d-1), sqrt(d)-sqrt(n-1))^2,
    which tracks the squared smallest singular value of A/sqrt(max(n, d));
    for n = d it decays like 1/(4 n^2).
    """
    n, d = int(n), int(d)
    if n < 1 or d < 1:
        raise DomainError(f"dimensions must be positive, got {n}, {d}")
    gap = max(math.sqrt(n) - math.sqrt(d - 1), math.sqrt(d) - math.sqrt(n - 1))
    return min(1.0 / n, 1.0 / d) * gap ** 2
