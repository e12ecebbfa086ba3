import math
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, model_validator

from specsampler.core.contract import ModelContract
from specsampler.core.model import Complex
from specsampler.exception_classes import InvalidAnchorException


class StructureFunction(BaseModel):
    """
    Handle for ``e(z) = i sqrt(pi / (k(w0, w0) |Im w0|)) (conj(w0) - z) k(z, w0)``.

    Attributes:
        model: Model whose structure kernel builds e.
        w0: Non-real anchor.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: ModelContract
    w0: Complex = 1j

    @model_validator(mode='after')
    def check_anchor(self) -> Self:
        """
        Validates the anchor.

        Raises:
            InvalidAnchorException: If ``w0`` is real or ``k(w0, w0)`` is not positive.

        Returns:
            The validated StructureFunction instance.
        """
        if self.w0.imag == 0:
            raise InvalidAnchorException(f'Anchor {self.w0} must be non-real')
        if not self.anchor_kernel > 0 or not math.isfinite(self.anchor_kernel):
            raise InvalidAnchorException(f'Kernel at the anchor {self.w0} is not positive')
        return self

    @property
    def anchor_kernel(self) -> float:
        return self.model.structure_kernel(self.w0, self.w0).real

    @property
    def prefactor(self) -> complex:
        return 1j * math.sqrt(math.pi / (self.anchor_kernel * abs(self.w0.imag)))


class ABPair(BaseModel):
    """
    Values of the entire functions ``a`` and ``b`` with ``e = a + i b`` at one point.
    """
    a_val: Complex
    b_val: Complex

    @property
    def e_val(self) -> complex:
        return self.a_val + 1j * self.b_val


class BlaschkeReport(BaseModel):
    in_space: bool
    norm_ratio: float
    passed: bool


class StarReport(BaseModel):
    """
    Outcome of the ``f*(z) = conj(f(conj z))`` check.

    Attributes:
        max_error: Largest deviation on the grid, relative to ``max(1, |phi| sqrt(k(z, z)))``.
        norm_error: ``| |phi*| - |phi| |``.
        points: Number of grid points.
        passed: Whether both errors are within the tolerance.
    """
    max_error: float
    norm_error: float
    points: int
    passed: bool


class EvaluationBoundReport(BaseModel):
    value: float
    bound: float
    ratio: float
    holds: bool


class DominanceReport(BaseModel):
    """
    Share of grid points in the half-plane of ``w0`` where ``|e(z)| > |e(conj z)|``.
    """
    half_plane: Literal['upper', 'lower']
    points: int
    dominated: int

    @property
    def fraction(self) -> float:
        return self.dominated / self.points if self.points else 1.0
