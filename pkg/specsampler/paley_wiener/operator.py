import logging
import math

import numpy as np

from specsampler.core.contract import ModelContract
from specsampler.core.model import ExtensionParameter, SamplingSet, StateVector
from specsampler.exception_classes import ContractViolationException
from specsampler.paley_wiener.model import PWConfig, PhaseParameter

logger = logging.getLogger('App.PaleyWiener')

SERIES_THRESHOLD = 1e-6


def _interval_integral(s: np.ndarray, a: float) -> np.ndarray:
    """
    ``int_0^a exp(i s t) dt`` with the removable singularity at ``s = 0`` handled by a series.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    result = np.empty_like(s)
    small = np.abs(s) < SERIES_THRESHOLD
    large = ~small
    result[large] = np.expm1(1j * s[large] * a) / (1j * s[large])
    u = 1j * s[small]
    result[small] = a + u * a ** 2 / 2 + u ** 2 * a ** 3 / 6 + u ** 3 * a ** 4 / 24
    return result


def _centred_integral(s: np.ndarray, a: float) -> np.ndarray:
    """
    ``int_{-a/2}^{a/2} exp(i s t) dt = 2 sin(s a / 2) / s``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    result = np.empty_like(s)
    small = np.abs(s) < SERIES_THRESHOLD
    large = ~small
    result[large] = 2 * np.sin(s[large] * a / 2) / s[large]
    u = s[small]
    result[small] = a - u ** 2 * a ** 3 / 24 + u ** 4 * a ** 5 / 1920
    return result


def _basis_values(cfg: PWConfig, z: complex) -> np.ndarray:
    # tau_k(z) = int_0^a exp(i z t) exp(-i lambda_k t) dt / sqrt(a)
    return _interval_integral(complex(z) - cfg.reference_points(), cfg.a) / math.sqrt(cfg.a)


def pw_transform(cfg: PWConfig, state: StateVector, z: complex) -> complex:
    """
    Evaluates ``phi_hat(z) = int_0^a exp(i z t) f(t) dt`` for a state in the reference basis.

    Raises:
        ContractViolationException: If the state is not in the reference basis of ``cfg``.
    """
    if state.basis_tag != cfg.basis_tag or len(state) != cfg.dimension:
        raise ContractViolationException(f'State in basis "{state.basis_tag}" is not a "{cfg.basis_tag}" state')
    return complex(np.dot(_basis_values(cfg, z), state.coeffs))


def pw_kernel(cfg: PWConfig, z: complex, w: complex) -> complex:
    """
    Closed-form kernel ``(exp(i (z - conj w) a) - 1) / (i (z - conj w))`` of the whole space.
    """
    return complex(_interval_integral(complex(z) - complex(w).conjugate(), cfg.a)[0])


def pw_sampling_points(cfg: PWConfig, phase: PhaseParameter, window: int) -> SamplingSet:
    """
    Spectrum ``(2 pi n - theta) / a`` for ``n = -window..window``.

    Every kernel norm equals ``a``.
    """
    if window < 0:
        raise ContractViolationException(f'Window must not be negative, got {window}')
    n = np.arange(-window, window + 1)
    points = (2 * math.pi * n - phase.theta) / cfg.a
    logger.info(f'Sampling lattice for a={cfg.a}, {phase.label()}: {len(points)} points')
    return SamplingSet.from_kernel_norms(points, np.full(len(points), cfg.a), extension_param=phase)


def pw_sample(cfg: PWConfig, state: StateVector, sampling_set: SamplingSet) -> np.ndarray:
    return np.array([pw_transform(cfg, state, x) for x in sampling_set.points], dtype=complex)


class PaleyWienerModel(ModelContract):
    """
    Interval operator model with the boundary-phase extensions.

    The reference basis is finite, the kernel is that of the whole space, so kernel identities
    hold up to the coefficient tail beyond the cutoff. No entire gauge is known for this model.

    Attributes:
        cfg: Interval and reference basis.
        window: Half-width of the sampling lattices the extension family produces.
    """

    def __init__(self, cfg: PWConfig, window: int):
        if window < 0:
            raise ContractViolationException(f'Window must not be negative, got {window}')
        self.cfg = cfg
        self.window = window

    @property
    def basis_tag(self) -> str:
        return self.cfg.basis_tag

    @property
    def dimension(self) -> int:
        return self.cfg.dimension

    def basis_functions(self, z: complex) -> np.ndarray:
        return _basis_values(self.cfg, z)

    def kernel_value(self, z: complex, w: complex) -> complex:
        return pw_kernel(self.cfg, z, w)

    def structure_kernel(self, z: complex, w: complex) -> complex:
        # exp(-i a z / 2) k(z, w) exp(i a conj(w) / 2), the kernel of the centred interval
        return complex(_centred_integral(complex(z) - complex(w).conjugate(), self.cfg.a)[0])

    def __phase(self, param: ExtensionParameter) -> PhaseParameter:
        if not isinstance(param, PhaseParameter):
            raise ContractViolationException(f'Interval extensions take a boundary phase, got {param!r}')
        return param

    def extension_family(self, param: ExtensionParameter) -> SamplingSet:
        return pw_sampling_points(self.cfg, self.__phase(param), self.window)

    def default_extension(self) -> PhaseParameter:
        return PhaseParameter(theta=self.cfg.reference_phase)

    def extension_parameters(self, count: int) -> list[PhaseParameter]:
        return [PhaseParameter(theta=(self.cfg.reference_phase + 2 * math.pi * j / count) % (2 * math.pi))
                for j in range(count)]

    def expected_gap(self) -> float:
        return 2 * math.pi / self.cfg.a
