from typing import Optional, Self

from pydantic import BaseModel, ConfigDict, model_validator

from specsampler.core.contract import ModelContract
from specsampler.core.model import Complex, ComplexVector, SamplingSet
from specsampler.exception_classes import ContractViolationException


class SampledSignal(BaseModel):
    """
    Values ``f(x_n)`` on a sampling set.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sampling_set: SamplingSet
    values: ComplexVector

    @model_validator(mode='after')
    def check_lengths(self) -> Self:
        if len(self.values) != len(self.sampling_set):
            raise ContractViolationException(
                f'{len(self.values)} samples for {len(self.sampling_set)} sampling points')
        return self


class LagrangeGenerator(BaseModel):
    """
    ``G(z) = (z - x_k) k(z, x_k) / k(x_k, x_k)``, vanishing on the whole sampling set.

    Attributes:
        model: The model whose kernel defines G.
        sampling_set: The zeros of G.
        anchor_index: Index of the node ``x_k`` at which ``G'(x_k) = 1``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: ModelContract
    sampling_set: SamplingSet
    anchor_index: int

    @model_validator(mode='after')
    def check_anchor(self) -> Self:
        if not 0 <= self.anchor_index < len(self.sampling_set):
            raise ContractViolationException(
                f'Anchor index {self.anchor_index} outside a set of {len(self.sampling_set)} points')
        return self

    @property
    def anchor(self) -> float:
        return float(self.sampling_set.points[self.anchor_index])

    @classmethod
    def default_for(cls, model: ModelContract, sampling_set: SamplingSet, anchor_index: Optional[int] = None):
        """
        Generator anchored at the given node, or at the node closest to the origin.
        """
        if anchor_index is None and len(sampling_set):
            anchor_index = int(sampling_set.summation_order()[0])
        return cls(model=model, sampling_set=sampling_set, anchor_index=anchor_index if anchor_index is not None else 0)


class ReconstructionRow(BaseModel):
    z: Complex
    terms: int
    f_true: Complex
    f_kernel: Complex
    f_lagrange: Complex
    err_kernel: float
    err_lagrange: float


class ReconstructionReport(BaseModel):
    """
    Errors of both sampling series against the transform on a grid, per term count.
    """
    rows: list[ReconstructionRow]
    schedule: list[int]

    def max_errors(self, terms: Optional[int] = None) -> tuple[float, float]:
        rows = [row for row in self.rows if terms is None or row.terms == terms]
        kernel = max((row.err_kernel for row in rows), default=0.0)
        lagrange = max((row.err_lagrange for row in rows), default=0.0)
        return kernel, lagrange
