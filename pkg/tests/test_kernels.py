import numpy as np
import pytest

from specdescent import (CapabilityError, DomainError, KernelSpec,
                         NumericalError, ScalarFunction, Seed,
                         dot_kernel_matrix, el_karoui_linearize,
                         gaussian_cloud, operator_norm, radial_kernel_matrix,
                         svd)


def test_radial_unit_diagonal():
    cloud = gaussian_cloud(6, 3, Seed(1))
    K = radial_kernel_matrix(cloud, 2.0)
    np.testing.assert_array_equal(np.diag(K), np.ones(6))
    np.testing.assert_array_equal(K, K.T)
    assert ((K > 0) & (K <= 1)).all()


def test_radial_two_point_values():
    # 1-D points at 0 and 5 with sigma=5: off-diagonal exp(-25/50)
    K = radial_kernel_matrix(np.array([[0.0], [5.0]]), 5.0)
    assert K[0, 1] == pytest.approx(np.exp(-0.5), rel=1e-12)
    # squared distance exactly 2 sigma^2 gives e^-1
    sigma = 1.7
    x = np.sqrt(2.0) * sigma
    K = radial_kernel_matrix(np.array([[0.0], [x]]), sigma)
    assert K[0, 1] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_radial_rejects_bad_sigma():
    cloud = np.zeros((2, 2))
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            radial_kernel_matrix(cloud, bad)


def test_radial_positive_semidefinite():
    for seed in range(5):
        cloud = gaussian_cloud(40, 8, Seed(seed))
        K = radial_kernel_matrix(cloud, 3.0)
        eigs = np.linalg.eigvalsh(K)
        assert eigs.min() >= -1e-8 * operator_norm(K)


def test_dot_linear_equals_normalized_gram():
    cloud = gaussian_cloud(12, 7, Seed(4))
    K = dot_kernel_matrix(cloud, KernelSpec.dot(ScalarFunction.linear()))
    expected = cloud @ cloud.T / 7
    assert np.abs(K - expected).max() <= 1e-12


def test_dot_constant():
    cloud = gaussian_cloud(5, 4, Seed(6))
    K = dot_kernel_matrix(cloud, KernelSpec.dot(ScalarFunction.constant(2.5)))
    np.testing.assert_array_equal(K, np.full((5, 5), 2.5))


def test_dot_affine_two_points_by_hand():
    X = np.array([[1.0, 2.0], [3.0, -1.0]])
    spec = KernelSpec.dot(ScalarFunction.affine(1.0, 1.0))
    K = dot_kernel_matrix(X, spec)
    # inner products: <x1,x1>=5, <x1,x2>=1, <x2,x2>=10; d=2
    expected = 1.0 + np.array([[5.0, 1.0], [1.0, 10.0]]) / 2.0
    np.testing.assert_allclose(K, expected, rtol=1e-15)


def test_dot_overflow_is_numerical_error():
    X = np.full((2, 1), 1e3)
    spec = KernelSpec.dot(ScalarFunction.exp_scaled(1e6))
    with pytest.raises(NumericalError):
        dot_kernel_matrix(X, spec)


def test_dot_requires_dot_spec():
    with pytest.raises(DomainError):
        dot_kernel_matrix(np.zeros((2, 2)), KernelSpec.radial(1.0))


def test_linearize_coefficients():
    lin = el_karoui_linearize(KernelSpec.dot(ScalarFunction.linear()))
    assert (lin.c_ones, lin.c_gram, lin.c_id) == (0.0, 1.0, 0.0)
    lin = el_karoui_linearize(KernelSpec.dot(ScalarFunction.constant(3.0)))
    assert (lin.c_ones, lin.c_gram, lin.c_id) == (3.0, 0.0, 0.0)
    lin = el_karoui_linearize(KernelSpec.dot(ScalarFunction.affine(1.0, 1.0)))
    assert (lin.c_ones, lin.c_gram, lin.c_id) == (1.0, 1.0, 0.0)


def test_linearize_exact_for_linear_f():
    cloud = gaussian_cloud(9, 5, Seed(8))
    lin = el_karoui_linearize(KernelSpec.dot(ScalarFunction.linear()))
    np.testing.assert_allclose(lin.assemble(cloud), cloud @ cloud.T / 5,
                               atol=1e-15)


def test_linearize_rejects_radial():
    with pytest.raises(DomainError):
        el_karoui_linearize(KernelSpec.radial(2.0))


def test_linearize_custom_table_without_zero_neighborhood():
    table = ScalarFunction.from_table([0.5, 1.0, 1.5], [1.0, 2.0, 3.0])
    with pytest.raises(CapabilityError):
        el_karoui_linearize(KernelSpec.dot(table))


def test_linearize_custom_table_finite_difference():
    ts = np.linspace(-0.5, 1.5, 2001)
    table = ScalarFunction.from_table(ts, 1.0 + ts + 0.5 * ts ** 2)
    lin = el_karoui_linearize(KernelSpec.dot(table))
    assert lin.c_ones == pytest.approx(1.0, abs=1e-9)
    assert lin.c_gram == pytest.approx(1.0, abs=1e-3)


def _median_linearization_distance(f, d, trials, gamma=0.5):
    n = int(round(gamma * d))
    spec = KernelSpec.dot(f)
    lin = el_karoui_linearize(spec)
    dists = []
    for trial in range(trials):
        cloud = gaussian_cloud(n, d, Seed(1000 + d).derive(trial))
        K = dot_kernel_matrix(cloud, spec)
        dists.append(operator_norm(K - lin.assemble(cloud)))
    return float(np.median(dists))


def test_linearization_distance_for_affine_f_is_zero():
    # the three-term form reproduces an affine kernel exactly
    assert _median_linearization_distance(ScalarFunction.affine(1.0, 1.0),
                                          d=60, trials=3) == 0.0


def test_linearization_distance_shrinks_for_curved_f():
    f = ScalarFunction.exp_scaled(1.0)
    near = _median_linearization_distance(f, d=100, trials=10)
    far = _median_linearization_distance(f, d=400, trials=10)
    assert far < near


def test_kernel_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec.radial(-1.0)
    with pytest.raises(DomainError):
        KernelSpec(family="dot_product")
    with pytest.raises(DomainError):
        KernelSpec(family="sobolev")


def test_scalar_function_derivatives():
    assert ScalarFunction.linear().derivative_at_zero() == 1.0
    assert ScalarFunction.exp_scaled(2.5).derivative_at_zero() == 2.5
    custom = ScalarFunction.from_callable(lambda t: np.sin(t))
    assert custom.derivative_at_zero() == pytest.approx(1.0, abs=1e-9)
