"""Acceptance suite: one test per headline criterion, at stated tolerances.

Each test prints a single PASS/FAIL line (run with -s or -rA to see them
all). The suite re-runs the full Monte Carlo experiments; expect a few
minutes of compute. Sweep fixtures are session-scoped so each heavy run
happens once.
"""

import math
import warnings

import numpy as np
import pytest

from specdescent import (Ensemble, ScalarFunction, Seed, SweepConfig,
                         aggregate, condition_number, detect_peak, edge_check,
                         el_karoui_linearize, error_amplification,
                         gaussian_cloud, gaussian_matrix, KernelSpec,
                         dot_kernel_matrix, log_grid, min_norm_solve,
                         operator_norm, pseudoinverse, run_sweep,
                         square_case_min_sv, svd)

from oracles import charpoly_singular_values

THREADS = 2
MASTER = Seed(20_240_817)


def criterion(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" :: {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def figure1_rows():
    grid = log_grid(20, 2000, 12, include=(100, 200, 400))
    config = SweepConfig(n=200, d_grid=grid, trials=20,
                         ensemble=Ensemble.gaussian(), master_seed=MASTER)
    return aggregate(run_sweep(config, threads=THREADS))


def test_double_descent_peak(figure1_rows):
    rows = {r.d: r for r in figure1_rows}
    d_peak, kappa_peak = detect_peak(figure1_rows)
    at_half = rows[400].kappa_median   # gamma = 0.5
    at_two = rows[100].kappa_median    # gamma = 2
    ok = (d_peak == 200
          and kappa_peak >= 10 * at_half
          and kappa_peak >= 10 * at_two)
    criterion(
        "double-descent peak: gaussian n=200, kappa_median maximal at d=200 "
        "and >= 10x the gamma=0.5 and gamma=2 medians",
        ok,
        f"peak at d={d_peak} kappa={kappa_peak:.1f}, "
        f"kappa(d=400)={at_half:.2f}, kappa(d=100)={at_two:.2f}")


def test_double_descent_monotone_flanks(figure1_rows):
    rows = sorted(figure1_rows, key=lambda r: r.d)
    peak = max(range(len(rows)), key=lambda i: rows[i].kappa_median)
    left = [r.kappa_median for r in rows[:peak + 1]]
    right = [r.kappa_median for r in rows[peak:]]
    left_viol = sum(b <= a for a, b in zip(left, left[1:]))
    right_viol = sum(b >= a for a, b in zip(right, right[1:]))
    criterion("double-descent shape: kappa_median decreases away from d = n "
              "on each side (one grid-point slack)",
              left_viol <= 1 and right_viol <= 1,
              f"violations left={left_viol} right={right_viol}")


def test_mp_edge_agreement():
    config = SweepConfig(n=500, d_grid=(500,), trials=20,
                         ensemble=Ensemble.gaussian(), master_seed=MASTER)
    details, ok = [], True
    for gamma in (0.25, 0.5, 2.0, 4.0):
        emp_lo, emp_hi, th_lo, th_hi = edge_check(config, gamma)
        good = (abs(emp_lo - th_lo) <= 0.1 * th_lo
                and abs(emp_hi - th_hi) <= 0.1 * th_hi)
        ok = ok and good
        details.append(f"gamma={gamma}: emp=({emp_lo:.4f},{emp_hi:.4f}) "
                       f"theory=({th_lo:.4f},{th_hi:.4f})")
    criterion("MP edge agreement within 10% at n=500 for gamma in "
              "{0.25, 0.5, 2, 4}", ok, "; ".join(details))


def test_predicted_kappa_agreement():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        config = SweepConfig(n=1000, d_grid=(4000,), trials=20,
                             ensemble=Ensemble.gaussian(), master_seed=MASTER)
        rows = aggregate(run_sweep(config, threads=THREADS))
    med = rows[0].kappa_median
    ok = abs(med - 3.0) <= 0.1 * 3.0
    criterion("predicted kappa: gaussian n=1000 gamma=0.25, kappa_median "
              "within 10% of 3.0", ok, f"kappa_median={med:.4f}")


def test_square_case_scale_law():
    sizes = (100, 200, 400)
    med_min, med_max = {}, {}
    for n in sizes:
        smin, smax = [], []
        for trial in range(50):
            A = gaussian_matrix(n, n, MASTER.derive(n, trial)) / math.sqrt(n)
            s = svd(A).singular_values
            smin.append(float(s[-1]))
            smax.append(float(s[0]))
        med_min[n] = float(np.median(smin))
        med_max[n] = float(np.median(smax))

    # the closed form tracks the squared smallest singular value of
    # A/sqrt(d) (it is a Gram-eigenvalue scale), so the predicted ratio
    # for the singular value itself is the square root of the formula's
    decreasing = med_min[100] > med_min[200] > med_min[400]
    ratio_ok = True
    details = []
    for a, b in ((100, 200), (200, 400)):
        measured = med_min[a] / med_min[b]
        predicted = math.sqrt(square_case_min_sv(a, a) / square_case_min_sv(b, b))
        ratio_ok = ratio_ok and predicted / 2 <= measured <= predicted * 2
        details.append(f"{a}->{b}: measured {measured:.3f} vs formula {predicted:.3f}")
    top_ok = all(abs(med_max[n] - 2.0) <= 0.05 * 2.0 for n in sizes)
    details.append("sigma_max medians " +
                   ", ".join(f"{n}: {med_max[n]:.4f}" for n in sizes))
    criterion("square-case scale law: min sv of A/sqrt(d) follows the "
              "closed-form trend (ratios within 2x) and max sv within 5% of 2",
              decreasing and ratio_ok and top_ok, "; ".join(details))


def test_kernel_double_descent_rbf():
    grid = log_grid(50, 800, 10, include=(200,))
    config = SweepConfig(n=200, d_grid=grid, trials=10,
                         ensemble=Ensemble.radial(5.0), master_seed=MASTER)
    rows = aggregate(run_sweep(config, threads=THREADS))
    d_peak, kappa_peak = detect_peak(rows)
    profile = ", ".join(f"d={r.d}: {r.kappa_median:.3g}" for r in rows)
    criterion("kernel double descent: RBF sigma=5, n=200, kappa of the "
              "kernel matrix peaks at d = n over a grid straddling 200",
              d_peak == 200, f"peak at d={d_peak} (kappa={kappa_peak:.3g}); {profile}")


def test_el_karoui_consistency():
    spec = KernelSpec.dot(ScalarFunction.affine(1.0, 1.0))
    lin = el_karoui_linearize(spec)
    medians = {}
    for d in (100, 400):
        n = d // 2  # gamma = 0.5
        dists = []
        for trial in range(10):
            cloud = gaussian_cloud(n, d, MASTER.derive(d, trial))
            K = dot_kernel_matrix(cloud, spec)
            dists.append(operator_norm(K - lin.assemble(cloud)))
        medians[d] = float(np.median(dists))
    criterion("El Karoui consistency: f(t)=1+t, gamma=0.5, median "
              "||K - K_lin||op at d=400 strictly smaller than at d=100",
              medians[400] < medians[100],
              f"median at d=100: {medians[100]:.3g}, at d=400: {medians[400]:.3g}")


def test_property_svd_tolerances_small_matrices():
    rng = np.random.default_rng(2025)
    shapes = [(1, 1), (2, 2), (3, 3), (2, 3), (3, 2), (3, 1), (1, 3)]
    worst_sv, worst_orth, worst_rec = 0.0, 0.0, 0.0
    for i in range(1000):
        shape = shapes[rng.integers(len(shapes))]
        A = rng.standard_normal(shape) * 10.0 ** rng.integers(-2, 3)
        dec = svd(A)
        r = min(shape)
        worst_orth = max(worst_orth,
                         np.abs(dec.U.T @ dec.U - np.eye(r)).max(),
                         np.abs(dec.V.T @ dec.V - np.eye(r)).max())
        scale = max(1.0, np.linalg.norm(A))
        worst_rec = max(worst_rec,
                        np.linalg.norm(dec.reconstruct() - A) / scale)
        expected = charpoly_singular_values(A)
        worst_sv = max(worst_sv, np.abs(dec.singular_values - expected).max()
                       / max(expected[0], np.finfo(float).tiny))
    ok = worst_sv <= 1e-8 and worst_orth <= 1e-10 and worst_rec <= 1e-8
    criterion("property: SVD reconstruction/orthogonality tolerances and "
              "characteristic-polynomial oracle agreement on 1000 small matrices",
              ok, f"sv err {worst_sv:.2e}, orth {worst_orth:.2e}, recon {worst_rec:.2e}")


def test_property_scale_invariance_and_moore_penrose():
    rng = np.random.default_rng(77)
    ok = True
    for shape in [(5, 5), (7, 3), (3, 7)]:
        A = rng.standard_normal(shape)
        base = condition_number(A)
        for c in (-3.0, 0.5, 40.0):
            ok = ok and abs(condition_number(c * A) - base) <= 1e-10 * base
        P = pseudoinverse(A)
        ok = ok and np.linalg.norm(A @ P @ A - A) <= 1e-8 * np.linalg.norm(A)
        ok = ok and np.linalg.norm(P @ A @ P - P) <= 1e-8 * np.linalg.norm(P)
    criterion("property: kappa scale invariance and Moore-Penrose identities",
              ok)


def test_property_min_norm_optimality():
    import scipy.linalg
    rng = np.random.default_rng(88)
    ok = True
    for _ in range(50):
        A = rng.standard_normal((3, 6))
        b = rng.standard_normal(3)
        res = min_norm_solve(A, b)
        null = scipy.linalg.null_space(A)
        for _ in range(4):
            z = null @ rng.standard_normal(null.shape[1])
            ok = ok and (np.linalg.norm(res.x + z)
                         >= np.linalg.norm(res.x) * (1 - 1e-10))
    criterion("property: minimum-norm optimality against null-space "
              "perturbations", ok)


def test_property_amplification_bound_100_systems():
    rng = np.random.default_rng(99)
    worst_excess = 0.0
    for i in range(100):
        n = int(rng.integers(2, 12))
        A = rng.standard_normal((n, n))
        b = rng.standard_normal(n)
        rep = error_amplification(A, b, delta_scale=1e-5, trials=4,
                                  seed=Seed(4000 + i))
        worst_excess = max(worst_excess, rep.max_ratio / rep.kappa)
    criterion("property: error amplification max_ratio <= kappa on 100 "
              "random square systems", worst_excess <= 1.0 + 1e-6,
              f"worst max_ratio/kappa = {worst_excess:.9f}")


def test_property_byte_identical_reruns():
    config = SweepConfig(n=30, d_grid=(10, 30, 90), trials=4,
                         ensemble=Ensemble.gaussian(), master_seed=Seed(5))
    strip = lambda recs: [(r.n, r.d, r.trial, r.seed, r.sigma_max,
                           r.sigma_min, r.kappa, r.kappa_mp) for r in recs]
    a = run_sweep(config, threads=1)
    b = run_sweep(config, threads=THREADS)
    criterion("property: sweeps reproduce exactly under fixed seeds, "
              "independent of thread count", strip(a) == strip(b))
