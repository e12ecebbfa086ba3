from __future__ import annotations

import math
import re
from typing import Optional, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from specsampler.core.model import ComplexVector, ExtensionParameter, RealVector
from specsampler.exception_classes import ContractViolationException


RULE_PATTERN = re.compile(r'^(free|chebyshev|power:(?P<power>[-+]?\d+(\.\d*)?([eE][-+]?\d+)?))$')


class JacobiCoefficients(BaseModel):
    """
    Off-diagonal and diagonal sequences of a Jacobi matrix.

    Explicit entries come first; a named rule, when present, continues both sequences
    indefinitely. Indices are 1-based in the rules: ``power:p`` means ``b_k = (k + 1)^p``.

    Attributes:
        b: Explicit off-diagonal entries ``b_1, b_2, ...``, strictly positive.
        q: Explicit diagonal entries ``q_1, q_2, ...``.
        rule: Optional generator, one of ``free``, ``chebyshev`` or ``power:p``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    b: RealVector = Field(default_factory=lambda: np.empty(0))
    q: RealVector = Field(default_factory=lambda: np.empty(0))
    rule: Optional[str] = None

    @field_validator('rule')
    @classmethod
    def check_rule(cls, rule: Optional[str]) -> Optional[str]:
        if rule is not None and not RULE_PATTERN.match(rule):
            raise ValueError(f'unknown coefficient rule "{rule}"')
        return rule

    @model_validator(mode='after')
    def check_coefficients(self) -> Self:
        if np.any(~np.isfinite(self.b)) or np.any(~np.isfinite(self.q)):
            raise ValueError('coefficients must be finite')
        if np.any(self.b <= 0):
            raise ValueError('off-diagonal coefficients b_k must be strictly positive')
        if self.rule is None and len(self.b) == 0:
            raise ValueError('either explicit coefficients or a rule is required')
        return self

    @classmethod
    def from_rule(cls, rule: str) -> JacobiCoefficients:
        return cls(rule=rule)

    def __generated(self, start: int, count: int, diagonal: bool) -> np.ndarray:
        if self.rule is None:
            kind = 'diagonal' if diagonal else 'off-diagonal'
            raise ContractViolationException(
                f'Only {start} explicit {kind} coefficients available, {start + count} requested')
        if diagonal:
            return np.zeros(count)
        if self.rule == 'free':
            return np.ones(count)
        if self.rule == 'chebyshev':
            return np.full(count, 0.5)
        power = float(RULE_PATTERN.match(self.rule).group('power'))
        index = np.arange(start + 1, start + count + 1, dtype=float)
        return (index + 1.0) ** power

    def off_diagonal(self, n: int) -> np.ndarray:
        """
        Returns ``b_1, ..., b_n``.

        Raises:
            ContractViolationException: If fewer than n entries exist and no rule extends them.
        """
        if n <= len(self.b):
            return np.array(self.b[:n])
        return np.concatenate([self.b, self.__generated(len(self.b), n - len(self.b), diagonal=False)])

    def diagonal(self, n: int) -> np.ndarray:
        """
        Returns ``q_1, ..., q_n``.

        Raises:
            ContractViolationException: If fewer than n entries exist and no rule extends them.
        """
        if n <= len(self.q):
            return np.array(self.q[:n])
        return np.concatenate([self.q, self.__generated(len(self.q), n - len(self.q), diagonal=True)])


class BoundaryAngle(ExtensionParameter):
    """
    Projective boundary angle of the truncated Jacobi family.

    ``tau = pi/2`` is the decoupled case, in which one eigenvalue has escaped to infinity.
    """
    tau: float

    @field_validator('tau')
    @classmethod
    def check_range(cls, tau: float) -> float:
        if not 0 <= tau < math.pi:
            raise ValueError(f'boundary angle must lie in [0, pi), got {tau}')
        return tau

    @property
    def decoupled(self) -> bool:
        return self.tau == math.pi / 2

    @property
    def cos(self) -> float:
        return 0.0 if self.decoupled else math.cos(self.tau)

    @property
    def sin(self) -> float:
        return 1.0 if self.decoupled else math.sin(self.tau)

    @property
    def tan(self) -> float:
        if self.decoupled:
            raise ContractViolationException('The decoupled angle has no finite shift')
        return math.tan(self.tau)

    def label(self) -> str:
        return f'tau={self.tau!r}'


class OrthoPolyEval(BaseModel):
    """
    Values ``P_0(z), ..., P_N(z)`` divided by the common factor ``exp(log_scale)``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: ComplexVector
    log_scale: float = 0.0

    def unscaled(self) -> np.ndarray:
        return self.values * np.exp(self.log_scale)


class LimitCircleReport(BaseModel):
    """
    Partial sums of ``|P_k(z)|^2`` at three checkpoints.

    Attributes:
        converged: Whether the last relative increment is below the tolerance.
        checkpoints: The indices ``K_max/4``, ``K_max/2`` and ``K_max``.
        partial_sums: ``S_K`` at the checkpoints, infinite when they overflow.
        log_partial_sums: Natural logarithms of ``S_K``.
        relative_increment: ``(S_Kmax - S_Kmax/2) / S_Kmax``.
        increment_ratio: ``(S_Kmax - S_Kmax/2) / (S_Kmax/2 - S_Kmax/4)``; about one half for
            summable power tails and at least one for divergent sums.
        tolerance: The tolerance the increment was compared to.
    """
    converged: bool
    checkpoints: list[int]
    partial_sums: list[float]
    log_partial_sums: list[float]
    relative_increment: float
    increment_ratio: float
    tolerance: float
