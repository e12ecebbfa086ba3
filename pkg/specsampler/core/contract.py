import logging
from abc import ABC, abstractmethod
from typing import Iterable, Optional

import numpy as np

from specsampler.core.model import DiscreteSpectralMeasure, ExtensionParameter, KernelVectorSpec, SamplingSet, \
    StateVector, machine_epsilon
from specsampler.exception_classes import ContractViolationException, DomainException, GaugeSingularException, \
    InternalAssertionException

logger = logging.getLogger('App.Kernel')

LEMMA_AGREEMENT = 1e-8


class ModelContract(ABC):
    """
    Operations every concrete model operator provides.

    A model fixes a reference orthonormal basis, identified by ``basis_tag``, and the transformed
    basis functions ``tau_k(z)`` so that ``phi_hat(z) = sum_k tau_k(z) phi_k``. The kernel vector
    ``xi(z)`` has coefficients ``conj(tau_k(z))``.
    """

    gauge_singular_set: frozenset[complex] = frozenset()

    @property
    @abstractmethod
    def basis_tag(self) -> str:
        pass

    @property
    @abstractmethod
    def dimension(self) -> int:
        pass

    @property
    def supports_gauge(self) -> bool:
        return False

    @property
    def is_real(self) -> bool:
        """
        Whether ``conj(phi)`` transforms to ``conj(phi_hat(conj(z)))`` in the reference basis.
        """
        return False

    def gauge(self) -> StateVector:
        raise ContractViolationException(f'Model "{self.basis_tag}" has no explicit gauge')

    @abstractmethod
    def basis_functions(self, z: complex) -> np.ndarray:
        """
        Values ``tau_k(z)`` of the transformed reference basis.
        """

    def xi(self, z: complex) -> StateVector:
        return StateVector(coeffs=np.conj(self.basis_functions(z)), basis_tag=self.basis_tag)

    def kernel_value(self, z: complex, w: complex) -> complex:
        return complex(np.sum(self.basis_functions(z) * np.conj(self.basis_functions(w))))

    def structure_kernel(self, z: complex, w: complex) -> complex:
        """
        Kernel the structure function is built from; the reproducing kernel unless a model needs a
        unitarily equivalent form that is real on the real axis.
        """
        return self.kernel_value(z, w)

    @abstractmethod
    def extension_family(self, param: ExtensionParameter) -> SamplingSet:
        pass

    @abstractmethod
    def default_extension(self) -> ExtensionParameter:
        pass

    @abstractmethod
    def extension_parameters(self, count: int) -> list[ExtensionParameter]:
        """
        ``count`` equally spaced parameters of the extension family, starting at the default.
        """

    @abstractmethod
    def expected_gap(self) -> float:
        """
        Lower estimate of the spacing between neighbouring points of one sampling set.
        """

    def resolvent_solve(self, param: ExtensionParameter, z: complex, rhs: np.ndarray) -> np.ndarray:
        raise ContractViolationException(f'Model "{self.basis_tag}" has no finite resolvent')

    def defect_representative(self, param: ExtensionParameter, vector: np.ndarray, z: complex) -> np.ndarray:
        return vector

    def multiply(self, h: StateVector, w: complex) -> StateVector:
        raise ContractViolationException(f'Model "{self.basis_tag}" has no multiplication operator')

    def check_state(self, phi: StateVector):
        if phi.basis_tag != self.basis_tag:
            raise ContractViolationException(
                f'State in basis "{phi.basis_tag}" does not belong to model "{self.basis_tag}"')
        if len(phi) != self.dimension:
            raise ContractViolationException(
                f'State has {len(phi)} coefficients, model "{self.basis_tag}" expects {self.dimension}')


def transform(model: ModelContract, phi: StateVector, z: complex) -> complex:
    """
    Evaluates the functional model ``phi_hat(z) = <xi(z), phi>``.

    Raises:
        ContractViolationException: If the state belongs to another basis.
        DomainException: If ``z`` is a gauge-singular point of the model.
    """
    model.check_state(phi)
    if complex(z) in model.gauge_singular_set:
        raise DomainException(f'{z} is a gauge-singular point of model "{model.basis_tag}"')
    return complex(np.dot(model.basis_functions(z), phi.coeffs))


def kernel(model: ModelContract, z: complex, w: complex) -> complex:
    """
    Reproducing kernel ``k(z, w) = <xi(z), xi(w)>``, analytic in ``z``.
    """
    for point in (z, w):
        if complex(point) in model.gauge_singular_set:
            raise DomainException(f'{point} is a gauge-singular point of model "{model.basis_tag}"')
    return model.kernel_value(z, w)


def spectral_measure(model: ModelContract, param: Optional[ExtensionParameter] = None) -> DiscreteSpectralMeasure:
    """
    Orthogonal spectral measure of one extension.

    Jumps are ``|mu_hat(x_n)|^2 / k(x_n, x_n)`` when the gauge is explicit and the plain weights
    otherwise.
    """
    sampling_set = model.extension_family(param if param is not None else model.default_extension())
    jumps = sampling_set.weights
    if model.supports_gauge:
        gauge = model.gauge()
        gauge_values = np.array([transform(model, gauge, x) for x in sampling_set.points])
        jumps = np.abs(gauge_values) ** 2 * sampling_set.weights
    return DiscreteSpectralMeasure(atoms=sampling_set.points, jumps=jumps)


def parseval_inner(model: ModelContract, phi: StateVector, eta: StateVector, measure: DiscreteSpectralMeasure) -> complex:
    """
    Inner product of two states computed from their transforms against a spectral measure.
    """
    phi_values = np.array([transform(model, phi, x) for x in measure.atoms], dtype=complex)
    eta_values = np.array([transform(model, eta, x) for x in measure.atoms], dtype=complex)
    return complex(np.sum(measure.jumps * np.conj(phi_values) * eta_values))


def reproducing_check(model: ModelContract, w: complex, measure: DiscreteSpectralMeasure, phi: StateVector) -> float:
    """
    Returns ``|phi_hat(w) - <xi(w), phi>|`` with the inner product taken against the measure.
    """
    return abs(transform(model, phi, w) - parseval_inner(model, model.xi(w), phi, measure))


def extension_sweep(model: ModelContract, params: Iterable[ExtensionParameter]) -> list[SamplingSet]:
    sets = []
    for param in params:
        sampling_set = model.extension_family(param)
        logger.debug(f'{param.label()}: {len(sampling_set)} points')
        sets.append(sampling_set)
    return sets


def _psi(model: ModelContract, spec: KernelVectorSpec, param: ExtensionParameter, z: complex) -> np.ndarray:
    # psi(z) = psi0 + (z - z0) R(z) psi0, evaluated at conj(z)
    point = complex(z).conjugate()
    resolved = model.resolvent_solve(param, point, spec.psi0_coeffs)
    psi = spec.psi0_coeffs + (point - spec.z0) * resolved
    return model.defect_representative(param, psi, point)


def _normalised_xi(model: ModelContract, psi: np.ndarray) -> np.ndarray:
    gauge = model.gauge().coeffs
    pairing = complex(np.vdot(gauge, psi))
    if abs(pairing) <= machine_epsilon * np.linalg.norm(psi):
        raise GaugeSingularException('The defect vector is orthogonal to the gauge')
    return psi / pairing


def build_xi_from_psi(model: ModelContract, spec: KernelVectorSpec, ext_a: ExtensionParameter,
                      ext_b: ExtensionParameter, z: complex) -> StateVector:
    """
    Builds the kernel vector from the defect family of two different extensions.

    ``psi(conj z) = (A - z0)(A - conj z)^{-1} psi0`` is computed with the finite resolvent of each
    extension and normalised against the gauge. Both results must agree, since the kernel vector
    does not depend on the extension.

    Args:
        model: A model with a finite resolvent and an explicit gauge.
        spec: The seed point and defect vector.
        ext_a: First extension.
        ext_b: Second extension.
        z: Evaluation point.

    Returns:
        The kernel vector computed with ``ext_a``.

    Raises:
        ContractViolationException: If the model has no finite resolvent or no gauge.
        SingularSolveException: If ``conj(z)`` lies in the spectrum of either extension.
        GaugeSingularException: If the defect vector is orthogonal to the gauge.
        InternalAssertionException: If the two extensions produce different kernel vectors.
    """
    if not model.supports_gauge:
        raise ContractViolationException(f'Model "{model.basis_tag}" has no explicit gauge')
    if len(spec.psi0_coeffs) != model.dimension:
        raise ContractViolationException(
            f'psi0 has {len(spec.psi0_coeffs)} coefficients, model expects {model.dimension}')

    xi_a = _normalised_xi(model, _psi(model, spec, ext_a, z))
    xi_b = _normalised_xi(model, _psi(model, spec, ext_b, z))

    difference = float(np.linalg.norm(xi_a - xi_b))
    logger.debug(f'Kernel vectors from {ext_a.label()} and {ext_b.label()} differ by {difference:.3e}')
    if difference > LEMMA_AGREEMENT * max(1.0, float(np.linalg.norm(xi_a))):
        raise InternalAssertionException(
            f'Kernel vectors of {ext_a.label()} and {ext_b.label()} differ by {difference:.3e}')

    return StateVector(coeffs=xi_a, basis_tag=model.basis_tag)
