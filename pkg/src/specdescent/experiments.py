"""Monte Carlo sweep engine for condition-number experiments.

Sweeps draw one matrix per (grid point, trial) from an independent
substream, measure its extreme singular values, and aggregate medians
and quartiles per grid point. Medians, not means: the condition number
near the square case is heavy-tailed and the curves of interest show
typical behavior. Trials may run on a thread pool; records are folded
in (grid index, trial) order so results never depend on scheduling.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import kernels, mp_theory, spectral
from .errors import ConvergenceError, DomainError
from .randmat import Seed, _coerce_seed, gaussian_cloud, gaussian_matrix, rademacher_matrix

SMALL_SIZE_WARN = 50  # below this min(n, d), asymptotic comparisons are moot


@dataclass(frozen=True)
class Ensemble:
    """What to draw at each grid point.

    Matrix ensembles (gaussian, rademacher) draw an n-by-d matrix.
    Kernel ensembles draw an n-point standard-normal cloud of dimension d
    and measure the n-by-n kernel matrix built from it.
    """

    kind: str  # gaussian | rademacher | radial_kernel | dot_kernel
    sigma: Optional[float] = None
    scalar_fn: Optional[kernels.ScalarFunction] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "rademacher", "radial_kernel", "dot_kernel"):
            raise DomainError(f"unknown ensemble {self.kind!r}")
        if self.kind == "radial_kernel" and not (self.sigma and self.sigma > 0):
            raise DomainError("radial_kernel ensemble needs sigma > 0")
        if self.kind == "dot_kernel" and self.scalar_fn is None:
            raise DomainError("dot_kernel ensemble needs a scalar function")

    @classmethod
    def gaussian(cls) -> "Ensemble":
        return cls(kind="gaussian")

    @classmethod
    def rademacher(cls) -> "Ensemble":
        return cls(kind="rademacher")

    @classmethod
    def radial(cls, sigma: float) -> "Ensemble":
        return cls(kind="radial_kernel", sigma=float(sigma))

    @classmethod
    def dot(cls, scalar_fn: kernels.ScalarFunction) -> "Ensemble":
        return cls(kind="dot_kernel", scalar_fn=scalar_fn)

    @property
    def is_kernel(self) -> bool:
        return self.kind in ("radial_kernel", "dot_kernel")

    def draw(self, n: int, d: int, seed: Seed) -> np.ndarray:
        if self.kind == "gaussian":
            return gaussian_matrix(n, d, seed)
        if self.kind == "rademacher":
            return rademacher_matrix(n, d, seed)
        cloud = gaussian_cloud(n, d, seed)
        if self.kind == "radial_kernel":
            return kernels.radial_kernel_matrix(cloud, self.sigma)
        return kernels.dot_kernel_matrix(cloud, kernels.KernelSpec.dot(self.scalar_fn))


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: fixed n, a d grid, trials per point, an ensemble."""

    n: int
    d_grid: tuple
    trials: int
    ensemble: Ensemble
    master_seed: Seed
    rank_tol: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "d_grid", tuple(int(d) for d in self.d_grid))
        object.__setattr__(self, "master_seed", _coerce_seed(self.master_seed))
        if self.n < 1:
            raise DomainError("n must be positive")
        if not self.d_grid:
            raise DomainError("d_grid must be nonempty")
        if any(d < 1 for d in self.d_grid):
            raise DomainError("d_grid entries must be positive")
        if any(b <= a for a, b in zip(self.d_grid, self.d_grid[1:])):
            raise DomainError("d_grid must be strictly increasing")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if self.n not in self.d_grid:
            warnings.warn(f"d_grid does not include d = n = {self.n}; "
                          "the peak of the curve will be missed", stacklevel=2)


@dataclass(frozen=True)
class SweepRecord:
    """Measured spectral summary of one trial."""

    n: int
    d: int
    gamma: float
    grid_index: int
    trial: int
    seed: int
    sigma_max: float
    sigma_min: float
    kappa: float
    kappa_mp: float
    wall_time_ms: float
    failed: bool = False


@dataclass(frozen=True)
class AggregateRow:
    """Per-grid-point summary over trials."""

    n: int
    d: int
    gamma: float
    trials: int
    kappa_q25: float
    kappa_median: float
    kappa_q75: float
    kappa_mp: float
    inf_count: int
    edge_lower_emp: float = float("nan")
    edge_upper_emp: float = float("nan")


class EdgeCheckResult(NamedTuple):
    emp_lower: float
    emp_upper: float
    theory_lower: float
    theory_upper: float


@dataclass(frozen=True)
class AmplificationReport:
    """Worst measured error amplification against the matrix's kappa."""

    max_ratio: float
    kappa: float
    b_projected: bool
    trials: int


def _kappa_from_sv(s: np.ndarray, shape, rank_tol) -> float:
    if rank_tol is None:
        rank_tol = max(shape) * spectral.DEFAULT_RANK_TOL_FACTOR
    smax, smin = float(s[0]), float(s[-1])
    if smax == 0.0 or smin <= rank_tol * smax:
        return float("inf")
    return smax / smin


def _run_one(config: SweepConfig, grid_index: int, d: int, trial: int) -> SweepRecord:
    sub = config.master_seed.derive(grid_index, trial)
    gamma = config.n / d
    kappa_mp = mp_theory.predicted_condition_number(gamma)
    start = time.perf_counter()
    matrix = config.ensemble.draw(config.n, d, sub)
    try:
        s = spectral.svd(matrix).singular_values
        smax, smin = float(s[0]), float(s[-1])
        kappa = _kappa_from_sv(s, matrix.shape, config.rank_tol)
        failed = False
    except ConvergenceError:
        smax = smin = kappa = float("nan")
        failed = True
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return SweepRecord(n=config.n, d=d, gamma=gamma, grid_index=grid_index,
                       trial=trial, seed=sub.master, sigma_max=smax,
                       sigma_min=smin, kappa=kappa, kappa_mp=kappa_mp,
                       wall_time_ms=elapsed_ms, failed=failed)


def run_sweep(config: SweepConfig, *, threads: int = 1, log=None) -> list:
    """All |d_grid| * trials records, deterministic for a given master seed.

    Trials within a grid point run concurrently on up to ``threads``
    workers; a spectral failure marks its record instead of aborting.
    ``log``, when given, is called with each finished grid point's
    AggregateRow.
    """
    threads = max(1, int(threads))
    records = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for grid_index, d in enumerate(config.d_grid):
            futures = [pool.submit(_run_one, config, grid_index, d, trial)
                       for trial in range(config.trials)]
            point_records = [f.result() for f in futures]
            records.extend(point_records)
            if log is not None:
                for row in aggregate(point_records):
                    log(row)
    return records


def _quartiles(finite: np.ndarray, inf_count: int) -> tuple:
    if finite.size:
        q25, med, q75 = np.percentile(finite, [25.0, 50.0, 75.0])
        return float(q25), float(med), float(q75)
    if inf_count:
        return float("inf"), float("inf"), float("inf")
    return float("nan"), float("nan"), float("nan")


def aggregate(records: Sequence[SweepRecord]) -> list:
    """One AggregateRow per (n, d), in first-appearance order.

    Medians and quartiles are taken over finite kappas; +inf kappas are
    counted separately (an all-infinite group reports +inf medians);
    failed records are dropped from the statistics.
    """
    if not records:
        raise DomainError("no records to aggregate")
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.n, rec.d), []).append(rec)

    rows = []
    for (n, d), group in groups.items():
        ok = [r for r in group if not r.failed]
        if not ok:
            warnings.warn(f"all {len(group)} trials failed at (n={n}, d={d}); "
                          "group skipped", stacklevel=2)
            continue
        kappas = np.array([r.kappa for r in ok])
        finite = kappas[np.isfinite(kappas)]
        inf_count = int(np.isinf(kappas).sum())
        q25, med, q75 = _quartiles(finite, inf_count)
        denom = max(n, d)
        rows.append(AggregateRow(
            n=n, d=d, gamma=n / d, trials=len(group),
            kappa_q25=q25, kappa_median=med, kappa_q75=q75,
            kappa_mp=group[0].kappa_mp, inf_count=inf_count,
            edge_lower_emp=float(np.median([r.sigma_min ** 2 / denom for r in ok])),
            edge_upper_emp=float(np.median([r.sigma_max ** 2 / denom for r in ok])),
        ))
    return rows


def detect_peak(rows: Sequence[AggregateRow]) -> tuple:
    """(d, kappa_median) of the grid point with the largest median.

    Infinite medians dominate finite ones; ties go to the smallest d.
    If every median is infinite the point with the most infinite trials
    wins (ties again to the smallest d).
    """
    if not rows:
        raise DomainError("no aggregate rows")
    rows = sorted(rows, key=lambda r: r.d)
    if all(math.isinf(r.kappa_median) for r in rows):
        best = max(rows, key=lambda r: (r.inf_count, -r.d))
        return best.d, best.kappa_median
    best = None
    for row in rows:
        if math.isnan(row.kappa_median):
            continue
        if best is None or row.kappa_median > best.kappa_median:
            best = row
    return best.d, best.kappa_median


def edge_check(config: SweepConfig, gamma: float) -> EdgeCheckResult:
    """Empirical vs theoretical extreme eigenvalues of the normalized Gram.

    Draws ``config.trials`` gaussian matrices with n = config.n and
    d = round(n / gamma), normalizes the squared singular values by d
    (gamma < 1) or n (gamma > 1), and medians the extremes over trials.
    """
    gamma = float(gamma)
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    if abs(gamma - 1.0) < 0.1:
        raise DomainError("edge_check needs |gamma - 1| >= 0.1; the square "
                          "case has no finite-n lower edge to compare")
    if config.ensemble.kind != "gaussian":
        raise DomainError("edge_check is defined for the gaussian ensemble")
    n = config.n
    d = max(1, round(n / gamma))
    if min(n, d) < SMALL_SIZE_WARN:
        warnings.warn(f"min(n, d) = {min(n, d)} is far from the asymptotic "
                      "regime; edge agreement is not expected", stacklevel=2)
    denom = d if gamma < 1 else n
    lows, highs = [], []
    for trial in range(config.trials):
        sub = config.master_seed.derive(trial)
        A = gaussian_matrix(n, d, sub)
        s = spectral.svd(A).singular_values
        lows.append(float(s[-1]) ** 2 / denom)
        highs.append(float(s[0]) ** 2 / denom)
    theory_lower, theory_upper = mp_theory.mp_edges(gamma)
    return EdgeCheckResult(emp_lower=float(np.median(lows)),
                           emp_upper=float(np.median(highs)),
                           theory_lower=theory_lower,
                           theory_upper=theory_upper)


def error_amplification(A, b, delta_scale: float, trials: int, seed) -> AmplificationReport:
    """Measured amplification of rhs perturbations through the min-norm solve.

    Per trial a random perturbation is projected onto the range of A,
    scaled to delta_scale * ||b||, and the relative-error ratio
    (||x' - x|| / ||x||) / (||db|| / ||b||) is recorded. The maximum is
    bounded by kappa for consistent systems, which is what this measures:
    b is projected onto the range first (flagged in the report).
    """
    if not delta_scale > 0:
        raise DomainError("delta_scale must be positive")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    A = spectral._as_matrix(A)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise DomainError("rhs length does not match matrix rows")

    dec = spectral.svd(A)
    s = dec.singular_values
    threshold = spectral._rank_threshold(s, A.shape, None)
    keep = s > threshold
    if not keep.any():
        raise DomainError("matrix is numerically zero; amplification undefined")
    U_r = dec.U[:, keep]
    V_r = dec.V[:, keep]
    s_r = s[keep]
    kappa = float(s[0] / s_r[-1])

    b_range = U_r @ (U_r.T @ b)
    projected = not np.allclose(b, b_range, rtol=0.0,
                                atol=1e-12 * max(1.0, float(np.linalg.norm(b))))
    b_norm = float(np.linalg.norm(b_range))
    x = V_r @ ((U_r.T @ b_range) / s_r)
    x_norm = float(np.linalg.norm(x))
    if b_norm == 0.0 or x_norm == 0.0:
        raise DomainError("rhs has no component in the range of A; "
                          "amplification undefined")

    rng = _coerce_seed(seed).stream("amplification")
    max_ratio = 0.0
    for _ in range(trials):
        g = rng.standard_normal(A.shape[0])
        db = U_r @ (U_r.T @ g)
        db_norm = float(np.linalg.norm(db))
        if db_norm == 0.0:
            continue
        db *= delta_scale * b_norm / db_norm
        dx = V_r @ ((U_r.T @ db) / s_r)
        ratio = (float(np.linalg.norm(dx)) / x_norm) / (delta_scale)
        max_ratio = max(max_ratio, ratio)
    return AmplificationReport(max_ratio=max_ratio, kappa=kappa,
                               b_projected=projected, trials=trials)


def log_grid(lo: int, hi: int, points: int, include: Sequence[int] = ()) -> tuple:
    """Log-spaced integer grid on [lo, hi] with forced members, deduplicated."""
    if not (1 <= lo < hi):
        raise DomainError("need 1 <= lo < hi")
    if points < 2:
        raise DomainError("need at least 2 grid points")
    grid = set(int(round(x)) for x in np.geomspace(lo, hi, points))
    grid.update(int(v) for v in include)
    return tuple(sorted(v for v in grid if v >= 1))
