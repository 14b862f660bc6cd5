"""Kernel Gram matrices from data clouds, and their linear equivalents.

Two families: radial kernels exp(-||x-x'||^2 / (2 sigma^2)) and
dot-product kernels f(<x, x'>/d). For smooth dot-product kernels on
high-dimensional isotropic data the matrix is approximated by a linear
combination of the all-ones matrix, the normalized Gram matrix and the
identity; the coefficients (f(0), f'(0), f(1)-f(0)-f'(0)) are validated
empirically by the experiment suite rather than asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CapabilityError, DomainError, NumericalError

FD_STEP = 1e-6  # central-difference step for f'(0) of custom functions


@dataclass(frozen=True)
class ScalarFunction:
    """Scalar function applied entrywise by dot-product kernels.

    ``fn`` must accept numpy arrays; ``dfn``, when present, is the
    analytic derivative used for exact linearization coefficients.
    """

    name: str
    fn: Callable
    dfn: Optional[Callable] = None

    def __call__(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=np.float64)),
                          dtype=np.float64)

    def derivative_at_zero(self) -> float:
        if self.dfn is not None:
            return float(self.dfn(0.0))
        try:
            hi = float(self(FD_STEP))
            lo = float(self(-FD_STEP))
        except CapabilityError:
            raise CapabilityError(
                f"scalar function {self.name!r} cannot be evaluated around 0; "
                "derivative unavailable")
        return (hi - lo) / (2.0 * FD_STEP)

    @classmethod
    def linear(cls) -> "ScalarFunction":
        return cls("linear", lambda t: t, lambda t: 1.0)

    @classmethod
    def affine(cls, intercept: float, slope: float) -> "ScalarFunction":
        return cls(f"affine({intercept}, {slope})",
                   lambda t: intercept + slope * t, lambda t: slope)

    @classmethod
    def constant(cls, value: float) -> "ScalarFunction":
        return cls(f"constant({value})",
                   lambda t: np.full_like(np.asarray(t, dtype=np.float64), value),
                   lambda t: 0.0)

    @classmethod
    def exp_scaled(cls, rate: float) -> "ScalarFunction":
        return cls(f"exp_scaled({rate})", lambda t: np.exp(rate * t),
                   lambda t: rate * math.exp(rate * t))

    @classmethod
    def from_table(cls, knots, values) -> "ScalarFunction":
        """Piecewise-linear interpolant; queries outside the knot range
        (including the f'(0) difference stencil) raise CapabilityError."""
        knots = np.asarray(knots, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise DomainError("table needs matching 1-D knots and values")
        if not (np.diff(knots) > 0).all():
            raise DomainError("table knots must be strictly increasing")

        def fn(t):
            t = np.asarray(t, dtype=np.float64)
            if t.min() < knots[0] or t.max() > knots[-1]:
                raise CapabilityError(
                    f"table covers [{knots[0]}, {knots[-1]}] but was queried "
                    f"at [{t.min()}, {t.max()}]")
            return np.interp(t, knots, values)

        return cls("table", fn)

    @classmethod
    def from_callable(cls, fn, dfn=None, name: str = "custom") -> "ScalarFunction":
        return cls(name, fn, dfn)


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus its parameters."""

    family: str  # "radial" | "dot_product"
    bandwidth: Optional[float] = None
    scalar_fn: Optional[ScalarFunction] = None

    def __post_init__(self):
        if self.family == "radial":
            if self.bandwidth is None or not self.bandwidth > 0:
                raise DomainError("radial kernels need bandwidth > 0")
        elif self.family == "dot_product":
            if self.scalar_fn is None:
                raise DomainError("dot-product kernels need a scalar function")
        else:
            raise DomainError(f"unknown kernel family {self.family!r}")

    @classmethod
    def radial(cls, bandwidth: float) -> "KernelSpec":
        return cls(family="radial", bandwidth=float(bandwidth))

    @classmethod
    def dot(cls, scalar_fn: ScalarFunction) -> "KernelSpec":
        return cls(family="dot_product", scalar_fn=scalar_fn)


@dataclass(frozen=True)
class LinearizedKernel:
    """Coefficients of the linear-equivalent kernel approximation."""

    c_ones: float   # all-ones matrix
    c_gram: float   # normalized Gram (1/d) X X^T
    c_id: float     # identity

    def assemble(self, cloud) -> np.ndarray:
        """c_ones * 11^T + c_gram * (1/d) X X^T + c_id * I for the cloud."""
        X = _as_cloud(cloud)
        n, d = X.shape
        K = np.full((n, n), self.c_ones)
        K += self.c_gram * ((X @ X.T) / d)
        K[np.diag_indices(n)] += self.c_id
        return K


def _as_cloud(cloud) -> np.ndarray:
    X = np.asarray(cloud, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DomainError(f"expected an n-by-d point cloud, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise DomainError("cloud coordinates must be finite")
    return X


def _symmetrized(K: np.ndarray) -> np.ndarray:
    # assembly is row-blocked in BLAS; make symmetry exact regardless of schedule
    K += K.T
    K *= 0.5
    return K


def radial_kernel_matrix(cloud, sigma: float) -> np.ndarray:
    """n-by-n matrix exp(-||xi - xj||^2 / (2 sigma^2)) with unit diagonal."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    X = _as_cloud(cloud)
    sq = np.einsum("ij,ij->i", X, X)
    dist2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(dist2, 0.0, out=dist2)
    K = np.exp(dist2 / (-2.0 * sigma * sigma))
    K = _symmetrized(K)
    np.fill_diagonal(K, 1.0)
    return K


def dot_kernel_matrix(cloud, spec: KernelSpec) -> np.ndarray:
    """n-by-n matrix f(<xi, xj> / d) for a dot-product kernel spec."""
    if spec.family != "dot_product":
        raise DomainError("dot_kernel_matrix needs a dot_product KernelSpec")
    X = _as_cloud(cloud)
    gram = (X @ X.T) / X.shape[1]
    with np.errstate(over="raise", invalid="raise"):
        try:
            K = spec.scalar_fn(gram)
        except FloatingPointError as exc:
            raise NumericalError(
                f"scalar function {spec.scalar_fn.name!r} failed: {exc}") from exc
    if K.shape != gram.shape:
        raise DomainError("scalar function must act entrywise")
    if not np.isfinite(K).all():
        raise NumericalError(
            f"scalar function {spec.scalar_fn.name!r} produced non-finite entries")
    return _symmetrized(K)


def el_karoui_linearize(spec: KernelSpec) -> LinearizedKernel:
    """Linear-equivalent coefficients (f(0), f'(0), f(1) - f(0) - f'(0)).

    Valid for dot-product kernels on isotropic unit-variance clouds where
    diagonal inner products concentrate at 1 and off-diagonals at 0;
    radial kernels are out of scope and rejected.
    """
    if spec.family != "dot_product":
        raise DomainError("linearization applies to dot_product kernels only")
    f = spec.scalar_fn
    f0 = float(f(0.0))
    f1 = float(f(1.0))
    df0 = f.derivative_at_zero()
    if not (math.isfinite(f0) and math.isfinite(f1) and math.isfinite(df0)):
        raise DomainError("linearization needs finite f(0), f(1), f'(0)")
    return LinearizedKernel(c_ones=f0, c_gram=df0, c_id=f1 - f0 - df0)
