import math

import numpy as np
import pytest

from specsampler.core.contract import kernel
from specsampler.core.model import StateVector
from specsampler.debranges.model import StructureFunction
from specsampler.debranges.structure import ab_split, axiom_blaschke_check, axiom_star_check, \
    evaluation_bound_check, half_plane_dominance_scan, st_eval, st_zeros, structure_function_eval
from specsampler.exception_classes import ContractViolationException, DegreeOverflowException, \
    InvalidAnchorException
from specsampler.jacobi.model import JacobiCoefficients
from specsampler.jacobi.operator import JacobiModel
from specsampler.paley_wiener.model import PWConfig
from specsampler.paley_wiener.operator import PaleyWienerModel

# Sample data for testing
free_pair = JacobiModel(JacobiCoefficients(b=[1.0, 1.0], q=[0.0, 0.0]), 2)
pw_two_pi = PaleyWienerModel(PWConfig(a=2 * math.pi, basis_cutoff=4), window=4)
root_half_pi = math.sqrt(math.pi / 2)
upper_grid = [complex(x, y) for x in np.linspace(-3, 3, 7) for y in (0.5, 1.0, 2.0)]


@pytest.fixture
def random_model():
    rng = np.random.default_rng(31)

    def factory(n: int) -> JacobiModel:
        return JacobiModel(JacobiCoefficients(b=rng.uniform(0.5, 1.5, n), q=rng.uniform(-0.5, 0.5, n)), n)

    return factory


def random_state(model, top_free: bool = False) -> StateVector:
    rng = np.random.default_rng(model.dimension)
    coeffs = rng.normal(size=model.dimension) + 1j * rng.normal(size=model.dimension)
    if top_free:
        coeffs[-1] = 0
    return StateVector(coeffs=coeffs, basis_tag=model.basis_tag)


# Test StructureFunction validation
def test_structure_function_rejects_real_anchor():
    with pytest.raises(InvalidAnchorException):
        StructureFunction(model=free_pair, w0=0.5)


def test_structure_function_prefactor():
    sf = StructureFunction(model=free_pair, w0=1j)
    assert sf.anchor_kernel == pytest.approx(2.0)
    assert sf.prefactor == pytest.approx(1j * root_half_pi)


# Test structure_function_eval and ab_split methods
@pytest.mark.parametrize('z', [0.0, 0.5, -1.0 + 0.3j, 2j])
def test_structure_function_free_pair(z):
    # for the free pair with w0 = i, e(z) = -sqrt(pi / 2) (z + i)^2
    sf = StructureFunction(model=free_pair, w0=1j)
    assert structure_function_eval(sf, z) == pytest.approx(-root_half_pi * (z + 1j) ** 2, abs=1e-14)


def test_ab_split_free_pair():
    pair = ab_split(StructureFunction(model=free_pair, w0=1j), 0.5)
    assert pair.a_val == pytest.approx(0.75 * root_half_pi)
    assert pair.b_val == pytest.approx(-root_half_pi)
    assert pair.e_val == pytest.approx(-root_half_pi * (0.5 + 1j) ** 2)


@pytest.mark.parametrize('w0', [1j, 0.3 + 0.8j, -0.4 - 1.5j])
def test_ab_split_is_real_on_the_real_line(random_model, w0):
    for model in (random_model(6), pw_two_pi):
        sf = StructureFunction(model=model, w0=w0)
        for x in np.linspace(-2.5, 2.5, 11):
            pair = ab_split(sf, x)
            size = max(1.0, abs(pair.e_val))
            assert abs(pair.a_val.imag) < 1e-10 * size
            assert abs(pair.b_val.imag) < 1e-10 * size


# Test st_eval and st_zeros methods
def test_st_eval_endpoints(random_model):
    sf = StructureFunction(model=random_model(5), w0=0.2 + 1j)
    for z in (0.4, -1.3 + 0.2j):
        pair = ab_split(sf, z)
        assert st_eval(sf, 0.0, z) == pytest.approx(pair.b_val)
        assert st_eval(sf, math.pi / 2, z) == pytest.approx(-pair.a_val, abs=1e-12 * max(1.0, abs(pair.a_val)))


def test_st_eval_rejects_bad_angle():
    sf = StructureFunction(model=free_pair, w0=1j)
    with pytest.raises(ContractViolationException):
        st_eval(sf, math.pi, 0.0)
    with pytest.raises(ContractViolationException):
        st_eval(sf, -0.1, 0.0)


def test_st_zeros_free_pair():
    sf = StructureFunction(model=free_pair, w0=1j)
    np.testing.assert_allclose(st_zeros(sf, 0.0, -3.0, 3.0), [0.0], atol=1e-10)
    np.testing.assert_allclose(st_zeros(sf, math.pi / 2, -3.0, 3.0), [-1.0, 1.0], atol=1e-10)


def test_st_zeros_rejects_empty_interval():
    sf = StructureFunction(model=free_pair, w0=1j)
    with pytest.raises(ContractViolationException):
        st_zeros(sf, 0.0, 1.0, 1.0)


def test_st_zeros_interval_model_are_evenly_spaced():
    sf = StructureFunction(model=pw_two_pi, w0=1j)
    zeros = st_zeros(sf, 0.0, -3.2, 3.2)
    assert len(zeros) >= 6
    np.testing.assert_allclose(np.diff(zeros), 2 * math.pi / pw_two_pi.cfg.a, atol=1e-8)


# Test axiom_blaschke_check method
def test_blaschke_check_passes(random_model):
    model = random_model(7)
    h = random_state(model, top_free=True)
    for w in (0.3 + 0.7j, -2.0 - 0.1j):
        report = axiom_blaschke_check(model, h, w)
        assert report.in_space
        assert report.norm_ratio == pytest.approx(1.0, abs=1e-10)
        assert report.passed


def test_blaschke_check_errors(random_model):
    model = random_model(4)
    with pytest.raises(ContractViolationException):
        axiom_blaschke_check(model, random_state(model, top_free=True), 0.5)
    with pytest.raises(DegreeOverflowException):
        axiom_blaschke_check(model, random_state(model), 1j)
    with pytest.raises(ContractViolationException):
        axiom_blaschke_check(pw_two_pi, random_state(pw_two_pi), 1j)


# Test axiom_star_check method
def test_star_check_passes(random_model):
    model = random_model(8)
    report = axiom_star_check(model, random_state(model))
    assert report.points == 15
    assert report.passed
    assert report.norm_error == pytest.approx(0.0, abs=1e-14)


def test_star_check_needs_a_real_model():
    with pytest.raises(ContractViolationException):
        axiom_star_check(pw_two_pi, random_state(pw_two_pi), [0.5j])


# Test evaluation_bound_check method
def test_evaluation_bound(random_model):
    model = random_model(5)
    report = evaluation_bound_check(model, random_state(model), 0.3 - 0.4j)
    assert report.holds
    assert report.ratio <= 1.0 + 1e-12


def test_evaluation_bound_is_attained_by_the_kernel_vector():
    w = 0.5 + 0.5j
    report = evaluation_bound_check(free_pair, free_pair.xi(w), w)
    assert report.holds
    assert report.ratio == pytest.approx(1.0, rel=1e-12)
    assert report.bound == pytest.approx(kernel(free_pair, w, w).real, rel=1e-12)


# Test half_plane_dominance_scan method
def test_dominance_upper_anchor():
    sf = StructureFunction(model=free_pair, w0=1j)
    report = half_plane_dominance_scan(sf, upper_grid + [0.5, -1j])
    assert report.half_plane == 'upper'
    assert report.points == len(upper_grid)
    assert report.fraction == 1.0


def test_dominance_lower_anchor(random_model):
    sf = StructureFunction(model=random_model(6), w0=0.1 - 1j)
    lower_grid = [z.conjugate() for z in upper_grid]
    report = half_plane_dominance_scan(sf, lower_grid)
    assert report.half_plane == 'lower'
    assert report.dominated == report.points


def test_dominance_empty_grid():
    report = half_plane_dominance_scan(StructureFunction(model=free_pair, w0=1j), [0.0, -1j])
    assert report.points == 0
    assert report.fraction == 1.0
