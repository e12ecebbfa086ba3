from __future__ import annotations

from typing import Annotated, Optional, Self

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, SerializeAsAny, field_validator, \
    model_validator

from specsampler.exception_classes import ContractViolationException

machine_epsilon = float(np.finfo(float).eps)
tiny = float(np.finfo(float).tiny)


def _frozen_vector(dtype):
    def convert(value):
        array = np.array(value, dtype=dtype)
        if array.ndim != 1:
            raise ValueError(f'expected a one-dimensional vector, got shape {array.shape}')
        array.setflags(write=False)
        return array

    return convert


RealVector = Annotated[
    np.ndarray,
    BeforeValidator(_frozen_vector(float)),
    PlainSerializer(lambda array: [float(v) for v in array], return_type=list)
]


ComplexVector = Annotated[
    np.ndarray,
    BeforeValidator(_frozen_vector(complex)),
    PlainSerializer(lambda array: [[float(v.real), float(v.imag)] for v in array], return_type=list)
]


Complex = Annotated[
    complex,
    BeforeValidator(lambda value: complex(value)),
    PlainSerializer(lambda value: [value.real, value.imag], return_type=list)
]


class ExtensionParameter(BaseModel):
    """
    Label of one self-adjoint extension of a model operator.

    Concrete models subclass this with their own parametrisation.
    """
    model_config = ConfigDict(frozen=True)

    def label(self) -> str:
        raise NotImplementedError


class StateVector(BaseModel):
    """
    Element of a model space, stored as coefficients in the model's reference basis.

    Attributes:
        coeffs: Complex coefficients in the reference orthonormal basis.
        basis_tag: Identifier of the reference basis, compared by every model operation.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: ComplexVector
    basis_tag: str

    @field_validator('coeffs')
    @classmethod
    def check_finite(cls, coeffs: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(coeffs)):
            raise ValueError('state coefficients must be finite')
        return coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: StateVector) -> complex:
        """
        Basis inner product, antilinear in ``self``.
        """
        if other.basis_tag != self.basis_tag:
            raise ContractViolationException(f'Basis mismatch "{self.basis_tag}" vs "{other.basis_tag}"')
        return complex(np.vdot(self.coeffs, other.coeffs))

    def conjugate(self) -> StateVector:
        return StateVector(coeffs=np.conj(self.coeffs), basis_tag=self.basis_tag)

    @classmethod
    def basis_vector(cls, index: int, dimension: int, basis_tag: str) -> StateVector:
        coeffs = np.zeros(dimension, dtype=complex)
        coeffs[index] = 1.0
        return cls(coeffs=coeffs, basis_tag=basis_tag)


class SamplingSet(BaseModel):
    """
    Spectrum of one extension, used as a set of sampling points.

    Attributes:
        points: Strictly increasing real sampling points.
        kernel_norms: Kernel diagonal ``k(x_n, x_n)`` at each point.
        weights: Reciprocal kernel norms.
        extension_param: The extension that produced the set, ``None`` for sets read from files.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: RealVector
    kernel_norms: RealVector
    weights: RealVector
    extension_param: Optional[SerializeAsAny[ExtensionParameter]] = None

    @model_validator(mode='after')
    def check_consistency(self) -> Self:
        """
        Validates lengths, ordering, finiteness, positivity and the weight/norm reciprocity.

        Raises:
            ContractViolationException: If any of the structural invariants fails.

        Returns:
            The validated SamplingSet instance.
        """
        if not len(self.points) == len(self.kernel_norms) == len(self.weights):
            raise ContractViolationException('Sampling set arrays differ in length')
        if len(self.points) > 1 and not np.all(np.diff(self.points) > 0):
            raise ContractViolationException('Sampling points must be strictly increasing')
        if not np.all(np.isfinite(self.kernel_norms)) or not np.all(np.isfinite(self.weights)):
            raise ContractViolationException('Kernel norms and weights must be finite')
        if np.any(self.kernel_norms <= 0):
            raise ContractViolationException('Kernel norms must be positive')
        if np.any(np.abs(self.weights * self.kernel_norms - 1.0) > 4 * machine_epsilon):
            raise ContractViolationException('Weights must be reciprocal kernel norms')
        return self

    @classmethod
    def from_kernel_norms(cls, points, kernel_norms, extension_param: Optional[ExtensionParameter] = None):
        kernel_norms = np.asarray(kernel_norms, dtype=float)
        return cls(points=points, kernel_norms=kernel_norms, weights=1.0 / kernel_norms,
                   extension_param=extension_param)

    def __len__(self) -> int:
        return len(self.points)

    def summation_order(self) -> np.ndarray:
        """
        Indices by ascending ``|x_n|``, ties resolved toward minus infinity.
        """
        return np.lexsort((self.points, np.abs(self.points)))

    def index_of(self, x: complex) -> Optional[int]:
        """
        Index of the point equal to ``x``, or ``None`` when ``x`` is not a node.
        """
        if complex(x).imag != 0:
            return None
        matches = np.flatnonzero(self.points == complex(x).real)
        return int(matches[0]) if len(matches) else None


class DiscreteSpectralMeasure(BaseModel):
    """
    Atoms and jumps of an orthogonal spectral function of a model operator.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    atoms: RealVector
    jumps: RealVector

    @model_validator(mode='after')
    def check_atoms(self) -> Self:
        if len(self.atoms) != len(self.jumps):
            raise ContractViolationException(
                f'Measure has {len(self.atoms)} atoms but {len(self.jumps)} jumps')
        if np.any(self.jumps <= 0):
            raise ContractViolationException('Measure jumps must be positive')
        if len(self.atoms) > 1 and not np.all(np.diff(self.atoms) > 0):
            raise ContractViolationException('Measure atoms must be strictly increasing')
        return self

    def total_mass(self) -> float:
        return float(np.sum(self.jumps))


class KernelVectorSpec(BaseModel):
    """
    Seed of the defect-vector construction of the kernel vector.

    Attributes:
        z0: Non-real seed point.
        psi0_coeffs: Element of ``Ker(A* - z0)``; normalised to unit length on construction.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    z0: Complex
    psi0_coeffs: ComplexVector

    @field_validator('z0')
    @classmethod
    def check_seed(cls, z0: complex) -> complex:
        if z0.imag == 0:
            raise ValueError('the seed z0 must be non-real')
        return z0

    @field_validator('psi0_coeffs')
    @classmethod
    def normalise(cls, coeffs: np.ndarray) -> np.ndarray:
        norm = np.linalg.norm(coeffs)
        if norm == 0:
            raise ValueError('psi0 must be non-zero')
        unit = coeffs / norm
        unit.setflags(write=False)
        return unit
