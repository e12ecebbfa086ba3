from __future__ import annotations

from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from specsampler.core.model import RealVector


class TridiagMatrix(BaseModel):
    """
    Symmetric tridiagonal matrix with positive off-diagonal.

    Attributes:
        diag: Diagonal entries, length N.
        offdiag: Off-diagonal entries, length N - 1, strictly positive.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    diag: RealVector
    offdiag: RealVector

    @model_validator(mode='after')
    def check_shape(self) -> Self:
        if len(self.diag) < 1:
            raise ValueError('a tridiagonal matrix needs at least one diagonal entry')
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError(f'expected {len(self.diag) - 1} off-diagonal entries, got {len(self.offdiag)}')
        if np.any(self.offdiag <= 0):
            raise ValueError('off-diagonal entries must be strictly positive')
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise ValueError('matrix entries must be finite')
        return self

    @property
    def size(self) -> int:
        return len(self.diag)

    @property
    def scale(self) -> float:
        scale = max(np.max(np.abs(self.diag)), np.max(self.offdiag, initial=0.0))
        return float(scale) if scale > 0 else 1.0

    def gershgorin_bounds(self) -> tuple[float, float]:
        radius = np.zeros(self.size)
        radius[:-1] += self.offdiag
        radius[1:] += self.offdiag
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))

    def leading_section(self, n: int) -> TridiagMatrix:
        return TridiagMatrix(diag=self.diag[:n], offdiag=self.offdiag[:n - 1])

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """
        Matrix-vector product without forming the dense matrix.
        """
        result = self.diag * vector
        result[:-1] += self.offdiag * vector[1:]
        result[1:] += self.offdiag * vector[:-1]
        return result

    def banded(self, shift: complex = 0.0) -> np.ndarray:
        """
        Storage of ``m - shift`` in the layout of ``scipy.linalg.solve_banded`` with ``(1, 1)``.
        """
        bands = np.zeros((3, self.size), dtype=complex)
        bands[0, 1:] = self.offdiag
        bands[1, :] = self.diag - shift
        bands[2, :-1] = self.offdiag
        return bands
