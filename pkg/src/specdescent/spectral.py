"""Dense linear algebra on top of the one-sided Jacobi kernel.

SVD, operator norm, condition number, Moore-Penrose pseudoinverse and
minimum-norm least-squares solve. Tall inputs are reduced with a
Householder QR factorization first, so the Jacobi sweeps always run on
the small square factor; Jacobi is used for its accuracy on small
singular values, which drive everything near the square case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ConvergenceError, DomainError

# singular values <= max(n, d) * eps * sigma_max are treated as zero
DEFAULT_RANK_TOL_FACTOR = float(np.finfo(np.float64).eps)

# relative off-diagonal threshold and sweep cap for the Jacobi kernel
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectralDecomposition:
    """Thin SVD A = U @ diag(singular_values) @ V.T.

    U is n-by-r and V is d-by-r with orthonormal columns, r = min(n, d),
    singular values sorted descending.
    """

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    @property
    def rank_estimate(self) -> int:
        return int(np.count_nonzero(self.singular_values))

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.T


@dataclass(frozen=True)
class SolveResult:
    """Minimum-norm least-squares solution of A x = b."""

    x: np.ndarray
    residual_norm: float
    effective_rank: int


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DomainError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise DomainError("matrix entries must be finite")
    return A


def _complete_orthonormal(U: np.ndarray, missing) -> None:
    """Fill the listed columns of U with unit vectors orthogonal to the rest.

    Only reached for exactly rank-deficient inputs (zero singular values),
    so the O(m^2) scan per column is irrelevant.
    """
    m = U.shape[0]
    valid = [j for j in range(U.shape[1]) if j not in set(missing)]
    for j in missing:
        cols = U[:, valid] if valid else None
        best, best_norm = None, -1.0
        for k in range(m):
            v = np.zeros(m)
            v[k] = 1.0
            if cols is not None:
                v -= cols @ (cols.T @ v)
                v -= cols @ (cols.T @ v)
            nrm = float(np.linalg.norm(v))
            if nrm > best_norm:
                best, best_norm = v, nrm
            if nrm > 0.9:
                break
        U[:, j] = best / best_norm
        valid.append(j)


def svd(A, *, tol: float = JACOBI_TOL,
        max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Thin SVD via one-sided Jacobi with QR preconditioning.

    Parameters
    ----------
    A : (n, d) array_like
        Real matrix with finite entries.
    tol : float
        Relative column-orthogonality threshold for the Jacobi sweeps.
    max_sweeps : int
        Sweep cap; exceeding it raises ConvergenceError carrying the count.

    Returns
    -------
    SpectralDecomposition
    """
    A = _as_matrix(A)
    n, d = A.shape
    transposed = n < d
    B = A.T if transposed else A
    m, r = B.shape

    Q = None
    if m > r:
        Q, B = np.linalg.qr(B, mode="reduced")

    bflat = np.asfortranarray(B).ravel(order="F").copy()
    vflat = np.eye(r, dtype=np.float64).ravel()
    sweeps, converged = backend.jacobi_sweeps(bflat, B.shape[0], r, vflat,
                                              tol, max_sweeps)
    if not converged:
        raise ConvergenceError("Jacobi SVD iteration did not converge", sweeps)

    W = bflat.reshape((B.shape[0], r), order="F")
    s = np.sqrt(np.einsum("ij,ij->j", W, W))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    W = W[:, order]
    V = vflat.reshape((r, r), order="F")[:, order]

    nonzero = s > 0.0
    U = np.zeros_like(W)
    U[:, nonzero] = W[:, nonzero] / s[nonzero]
    if not nonzero.all():
        _complete_orthonormal(U, np.flatnonzero(~nonzero).tolist())

    if Q is not None:
        U = Q @ U
    if transposed:
        U, V = V, U

    U.setflags(write=False)
    s.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(U=U, singular_values=s, V=V)


def _rank_threshold(s: np.ndarray, shape, rank_tol) -> float:
    if rank_tol is None:
        rank_tol = max(shape) * DEFAULT_RANK_TOL_FACTOR
    if rank_tol < 0:
        raise DomainError("rank_tol must be >= 0")
    return float(rank_tol) * float(s[0])


def operator_norm(A) -> float:
    """Largest singular value (the l2-induced norm)."""
    return float(svd(A).singular_values[0])


def condition_number(A, *, rank_tol=None) -> float:
    """Ratio of extreme singular values, +inf below the rank tolerance.

    The smallest of the r = min(n, d) singular values is used; when it
    falls at or below rank_tol * sigma_max (default max(n, d) * eps) the
    matrix is numerically rank deficient and +inf is returned, so sweeps
    across the square case never divide by an exact zero.
    """
    A = _as_matrix(A)
    s = svd(A).singular_values
    smax, smin = float(s[0]), float(s[-1])
    threshold = _rank_threshold(s, A.shape, rank_tol)
    if smax == 0.0 or smin <= threshold:
        return float("inf")
    return smax / smin


def pseudoinverse(A, rank_tol=None) -> np.ndarray:
    """Moore-Penrose pseudoinverse, zeroing directions below tolerance.

    rank_tol is relative to the largest singular value; None selects the
    max(n, d) * eps default.
    """
    A = _as_matrix(A)
    dec = svd(A)
    s = dec.singular_values
    threshold = _rank_threshold(s, A.shape, rank_tol)
    keep = s > threshold
    if not keep.any():
        return np.zeros((A.shape[1], A.shape[0]))
    return (dec.V[:, keep] / s[keep]) @ dec.U[:, keep].T


def min_norm_solve(A, b, rank_tol=None) -> SolveResult:
    """Minimum-norm least-squares solution x = A^+ b.

    Among all minimizers of ||A x - b|| returns the one of smallest norm;
    x lives in the span of the retained right singular vectors.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise DomainError(
            f"rhs length {b.shape[0]} does not match {A.shape[0]} rows")
    if not np.isfinite(b).all():
        raise DomainError("rhs entries must be finite")

    dec = svd(A)
    s = dec.singular_values
    threshold = _rank_threshold(s, A.shape, rank_tol)
    keep = s > threshold
    if keep.any():
        coeffs = (dec.U[:, keep].T @ b) / s[keep]
        x = dec.V[:, keep] @ coeffs
    else:
        x = np.zeros(A.shape[1])
    residual = float(np.linalg.norm(A @ x - b))
    return SolveResult(x=x, residual_norm=residual,
                       effective_rank=int(np.count_nonzero(keep)))
