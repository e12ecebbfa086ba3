import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from specsampler.core.model import ExtensionParameter


class PWConfig(BaseModel):
    """
    Interval operator ``i d/dt`` on ``(0, a)`` with reference modes ``k = -K..K``.

    Attributes:
        a: Interval length.
        basis_cutoff: The cutoff K of the reference basis.
        reference_phase: Boundary phase of the extension whose eigenbasis is the coefficient basis.
    """
    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0)
    basis_cutoff: int = Field(ge=0)
    reference_phase: float = 0.0

    @field_validator('a')
    @classmethod
    def check_finite(cls, a: float) -> float:
        if not math.isfinite(a):
            raise ValueError('interval length must be finite')
        return a

    @field_validator('reference_phase')
    @classmethod
    def check_phase(cls, phase: float) -> float:
        if not 0 <= phase < 2 * math.pi:
            raise ValueError(f'reference phase must lie in [0, 2pi), got {phase}')
        return phase

    @property
    def basis_tag(self) -> str:
        tag = f'pw-reference(a={self.a!r},K={self.basis_cutoff})'
        if self.reference_phase:
            tag = tag[:-1] + f',phase={self.reference_phase!r})'
        return tag

    @property
    def dimension(self) -> int:
        return 2 * self.basis_cutoff + 1

    def modes(self) -> np.ndarray:
        return np.arange(-self.basis_cutoff, self.basis_cutoff + 1)

    def reference_points(self) -> np.ndarray:
        return (2 * math.pi * self.modes() - self.reference_phase) / self.a


class PhaseParameter(ExtensionParameter):
    """
    Boundary phase ``f(a) = exp(i theta) f(0)`` of an extension of the interval operator.
    """
    theta: float

    @field_validator('theta')
    @classmethod
    def check_range(cls, theta: float) -> float:
        if not 0 <= theta < 2 * math.pi:
            raise ValueError(f'phase must lie in [0, 2pi), got {theta}')
        return theta

    def label(self) -> str:
        return f'theta={self.theta!r}'
