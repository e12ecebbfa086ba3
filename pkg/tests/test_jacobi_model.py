import math

import numpy as np
import pytest
from pydantic import ValidationError

from specsampler.core.model import StateVector
from specsampler.exception_classes import ContractViolationException, DegreeOverflowException, \
    SingularSolveException
from specsampler.jacobi.model import BoundaryAngle, JacobiCoefficients
from specsampler.jacobi.operator import JacobiModel, boundary_function, cd_kernel, eval_ortho_polys, \
    gauss_quadrature, kernel_diagonal, limit_circle_diagnostic, place_sampling_point, sampling_set, truncation
from specsampler.tridiag import numerics

# Sample data for testing
free_pair = JacobiCoefficients(b=[1.0, 1.0], q=[0.0, 0.0])
half_pair = JacobiCoefficients(b=[0.5, 0.5], q=[0.0, 0.0])
shifted_single = JacobiCoefficients(b=[1.0], q=[5.0])
shifted_angle = BoundaryAngle(tau=math.pi - math.atan(1.5))


@pytest.fixture
def random_coefficients():
    rng = np.random.default_rng(11)

    def factory(n: int) -> JacobiCoefficients:
        return JacobiCoefficients(b=rng.uniform(0.5, 1.5, n), q=rng.uniform(-0.5, 0.5, n))

    return factory


# Test JacobiCoefficients validation and rules
def test_coefficients_validation():
    with pytest.raises(ValidationError):
        JacobiCoefficients(b=[1.0, 0.0], q=[0.0, 0.0])
    with pytest.raises(ValidationError):
        JacobiCoefficients(b=[1.0, -2.0])
    with pytest.raises(ValidationError):
        JacobiCoefficients(rule='legendre')
    with pytest.raises(ValidationError):
        JacobiCoefficients()


def test_coefficient_rules():
    np.testing.assert_array_equal(JacobiCoefficients.from_rule('free').off_diagonal(3), [1.0, 1.0, 1.0])
    np.testing.assert_array_equal(JacobiCoefficients.from_rule('chebyshev').off_diagonal(2), [0.5, 0.5])
    np.testing.assert_array_equal(JacobiCoefficients.from_rule('power:2').off_diagonal(3), [4.0, 9.0, 16.0])
    np.testing.assert_array_equal(JacobiCoefficients.from_rule('power:2').diagonal(3), [0.0, 0.0, 0.0])


def test_explicit_coefficients_continue_with_rule():
    c = JacobiCoefficients(b=[3.0], q=[1.0], rule='free')
    np.testing.assert_array_equal(c.off_diagonal(3), [3.0, 1.0, 1.0])
    np.testing.assert_array_equal(c.diagonal(3), [1.0, 0.0, 0.0])


def test_coefficients_run_out():
    with pytest.raises(ContractViolationException):
        free_pair.off_diagonal(3)


# Test BoundaryAngle
def test_boundary_angle():
    assert BoundaryAngle(tau=math.pi / 2).decoupled
    assert not BoundaryAngle(tau=0.0).decoupled
    with pytest.raises(ValidationError):
        BoundaryAngle(tau=math.pi)
    with pytest.raises(ValidationError):
        BoundaryAngle(tau=-0.1)
    with pytest.raises(ContractViolationException):
        _ = BoundaryAngle(tau=math.pi / 2).tan


# Test eval_ortho_polys method
@pytest.mark.parametrize('c, n, z, expected', [
    (free_pair, 2, 0.0, [1.0, 0.0, -1.0]),
    (half_pair, 2, 1.0, [1.0, 2.0, 3.0]),
    (shifted_single, 1, 5.0, [1.0, 0.0]),
])
def test_eval_ortho_polys(c, n, z, expected):
    np.testing.assert_allclose(eval_ortho_polys(c, n, z).unscaled(), expected, atol=1e-15)


def test_eval_ortho_polys_rescales_large_values():
    result = eval_ortho_polys(JacobiCoefficients.from_rule('free'), 400, 10.0)
    assert result.log_scale > 0
    assert np.all(np.isfinite(result.values))
    assert np.max(np.abs(result.values)) <= 1e150 * 10


# Test cd_kernel method
@pytest.mark.parametrize('z, w', [(0.3, -1.2), (2.0, 0.5), (-1.0, -1.0)])
def test_cd_kernel_two_terms(z, w):
    assert cd_kernel(free_pair, 2, z, w) == pytest.approx(1 + z * w, rel=1e-12)


def test_cd_kernel_single_term():
    assert cd_kernel(shifted_single, 1, 0.7 + 2j, -3.0) == pytest.approx(1.0)


def test_cd_kernel_matches_direct_sum(random_coefficients):
    rng = np.random.default_rng(3)
    for n in (1, 5, 17, 32):
        c = random_coefficients(n)
        for _ in range(20):
            z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            w = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            pz = eval_ortho_polys(c, n, z).unscaled()[:n]
            pw = eval_ortho_polys(c, n, w).unscaled()[:n]
            error = abs(cd_kernel(c, n, z, w) - np.sum(pz * pw)) / np.sum(np.abs(pz * pw))
            assert error < 1e-12


def test_cd_kernel_confluent_diagonal(random_coefficients):
    c = random_coefficients(6)
    for x in (-1.3, 0.0, 0.8):
        direct = kernel_diagonal(c, 6, np.array([x]))[0]
        assert cd_kernel(c, 6, x, x).real == pytest.approx(direct, rel=1e-12)
        assert cd_kernel(c, 6, x, x + 1e-12).real == pytest.approx(direct, rel=1e-10)


# Test sampling_set method
def test_sampling_set_reference_angle():
    s = sampling_set(free_pair, 2, BoundaryAngle(tau=0.0))
    np.testing.assert_allclose(s.points, [-1.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(s.kernel_norms, [2.0, 2.0], rtol=1e-13)
    np.testing.assert_allclose(s.weights, [0.5, 0.5], rtol=1e-13)


def test_sampling_set_shifted_angle():
    assert shifted_angle.tan == pytest.approx(-1.5)
    s = sampling_set(free_pair, 2, shifted_angle)
    np.testing.assert_allclose(s.points, [-2.0, 0.5], atol=1e-13)


def test_sampling_set_decoupled():
    s = sampling_set(free_pair, 2, BoundaryAngle(tau=math.pi / 2))
    np.testing.assert_allclose(s.points, [0.0], atol=1e-15)
    assert len(sampling_set(free_pair, 1, BoundaryAngle(tau=math.pi / 2))) == 0


def test_sampling_set_near_decoupled_angle():
    # one point escapes to about 1e13, where K_N(x, x) exceeds the double range
    with pytest.raises(ContractViolationException):
        sampling_set(JacobiCoefficients.from_rule('free'), 24, BoundaryAngle(tau=math.pi / 2 - 1e-13))
    moderate = sampling_set(JacobiCoefficients.from_rule('free'), 24, BoundaryAngle(tau=math.pi / 2 - 1e-4))
    assert np.all(np.isfinite(moderate.kernel_norms))


def test_sampling_set_points_are_zeros_of_boundary_function(random_coefficients):
    c = random_coefficients(7)
    for angle in (BoundaryAngle(tau=0.0), BoundaryAngle(tau=1.1), BoundaryAngle(tau=math.pi / 2)):
        s = sampling_set(c, 7, angle)
        for x in s.points:
            scale = np.sum(np.abs(eval_ortho_polys(c, 7, x).unscaled()))
            assert abs(boundary_function(c, 7, angle, x)) < 1e-10 * scale


def test_sampling_set_eigenvectors_and_orthogonality(random_coefficients):
    c = random_coefficients(8)
    angle = BoundaryAngle(tau=0.4)
    matrix = truncation(c, 8, angle)
    model = JacobiModel(c, 8)
    vectors = []
    for x in sampling_set(c, 8, angle).points:
        vector = numerics.eigvec_by_recurrence(matrix, x)
        np.testing.assert_allclose(model.xi(x).coeffs, vector, rtol=1e-12, atol=1e-12)
        assert model.xi(x).coeffs[0] == 1
        vectors.append(vector / np.linalg.norm(vector))
    vectors = np.array(vectors)
    np.testing.assert_allclose(vectors @ vectors.T, np.eye(8), atol=1e-10)


def test_truncation_rejects_decoupled_angle():
    with pytest.raises(ContractViolationException):
        truncation(free_pair, 2, BoundaryAngle(tau=math.pi / 2))


# Test place_sampling_point method
def test_place_sampling_point_examples():
    angle = place_sampling_point(free_pair, 2, 0.5)
    assert angle.tan == pytest.approx(-1.5, rel=1e-14)
    np.testing.assert_allclose(sampling_set(free_pair, 2, angle).points, [-2.0, 0.5], atol=1e-13)

    assert place_sampling_point(free_pair, 2, 0.0).decoupled
    assert place_sampling_point(free_pair, 2, 1.0).tau == 0.0


def test_place_sampling_point_roundtrip(random_coefficients):
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(2, 11))
        c = random_coefficients(n)
        x_star = float(rng.uniform(-3, 3))
        points = sampling_set(c, n, place_sampling_point(c, n, x_star)).points
        assert np.min(np.abs(points - x_star)) < 1e-8


# Test limit_circle_diagnostic method
def test_limit_circle_steep_growth_converges():
    report = limit_circle_diagnostic(JacobiCoefficients.from_rule('power:6'), 1j, 200, 1e-8)
    assert report.converged
    assert report.checkpoints == [50, 100, 200]
    assert report.relative_increment < 1e-8


def test_limit_circle_square_growth_decays():
    report = limit_circle_diagnostic(JacobiCoefficients.from_rule('power:2'), 1j, 200, 1e-2)
    assert report.converged
    assert 0 < report.increment_ratio < 1


def test_limit_circle_free_recurrence_diverges():
    report = limit_circle_diagnostic(JacobiCoefficients.from_rule('free'), 0j, 200, 1e-8)
    assert not report.converged
    assert report.increment_ratio >= 0.9


def test_limit_circle_overflowing_sums_are_reported():
    report = limit_circle_diagnostic(JacobiCoefficients.from_rule('free'), 5j, 400, 1e-8)
    assert not report.converged
    assert math.isinf(report.partial_sums[-1])
    assert math.isfinite(report.log_partial_sums[-1])


def test_limit_circle_degenerate_tolerance():
    assert limit_circle_diagnostic(JacobiCoefficients.from_rule('chebyshev'), 0.3j, 8, math.inf).converged


def test_limit_circle_rejects_bad_arguments():
    with pytest.raises(ContractViolationException):
        limit_circle_diagnostic(JacobiCoefficients.from_rule('free'), 1j, 7, 1e-8)
    with pytest.raises(ContractViolationException):
        limit_circle_diagnostic(JacobiCoefficients.from_rule('free'), 1j, 200, 0.0)


# Test gauss_quadrature method
def test_gauss_quadrature_is_exact_for_low_degree(random_coefficients):
    c = random_coefficients(5)
    nodes, weights = gauss_quadrature(c, 5)
    assert np.sum(weights) == pytest.approx(1.0, rel=1e-12)
    # moments of the spectral measure of delta_1 are (J^k)_{11}
    dense = np.diag(c.diagonal(5)) + np.diag(c.off_diagonal(4), 1) + np.diag(c.off_diagonal(4), -1)
    for degree in range(2 * 5):
        moment = np.linalg.matrix_power(dense, degree)[0, 0]
        assert np.sum(weights * nodes ** degree) == pytest.approx(moment, rel=1e-10, abs=1e-10)


# Test JacobiModel
def test_model_resolvent_matches_dense_solve(random_coefficients):
    c = random_coefficients(6)
    model = JacobiModel(c, 6)
    angle = BoundaryAngle(tau=0.7)
    rhs = np.arange(6, dtype=complex)
    z = 0.3 + 0.4j
    dense = np.diag(truncation(c, 6, angle).diag) + np.diag(c.off_diagonal(5), 1) + np.diag(c.off_diagonal(5), -1)
    expected = np.linalg.solve(dense - z * np.eye(6), rhs)
    np.testing.assert_allclose(model.resolvent_solve(angle, z, rhs), expected, rtol=1e-12, atol=1e-12)


def test_model_resolvent_at_eigenvalue():
    model = JacobiModel(free_pair, 2)
    with pytest.raises(SingularSolveException):
        model.resolvent_solve(BoundaryAngle(tau=0.0), 1.0, np.ones(2))


def test_model_multiply():
    model = JacobiModel(free_pair, 2)
    h = StateVector(coeffs=[1.0, 0.0], basis_tag=model.basis_tag)
    # (z - 2) * P_0 = P_1 - 2 P_0 for b_1 = 1, q_1 = 0
    np.testing.assert_allclose(model.multiply(h, 2.0).coeffs, [-2.0, 1.0])
    with pytest.raises(DegreeOverflowException):
        model.multiply(StateVector(coeffs=[0.0, 1.0], basis_tag=model.basis_tag), 2.0)


def test_model_expected_gap():
    assert JacobiModel(free_pair, 2).expected_gap() == pytest.approx(1.0)
    assert JacobiModel(free_pair, 1).expected_gap() == 1.0
