import logging
from typing import Optional, Sequence

import numpy as np

from specsampler.core.contract import ModelContract, transform
from specsampler.core.model import SamplingSet, StateVector
from specsampler.exception_classes import ContractViolationException, DegenerateNodeException
from specsampler.reconstruct.model import LagrangeGenerator, ReconstructionReport, ReconstructionRow, \
    SampledSignal

logger = logging.getLogger('App.Reconstruct')

DERIVATIVE_STEP = 1e-6
DEGENERATE_NODE = 1e-12


def sample(model: ModelContract, phi: StateVector, sampling_set: SamplingSet) -> SampledSignal:
    values = np.array([transform(model, phi, x) for x in sampling_set.points], dtype=complex)
    return SampledSignal(sampling_set=sampling_set, values=values)


def _used_nodes(sampling_set: SamplingSet, terms: Optional[int]) -> np.ndarray:
    if terms is None:
        terms = len(sampling_set)
    if terms < 0 or terms > len(sampling_set):
        raise ContractViolationException(f'{terms} terms requested, {len(sampling_set)} samples available')
    return sampling_set.summation_order()[:terms]


def _pass_through(signal: SampledSignal, used: np.ndarray, z: complex) -> Optional[complex]:
    index = signal.sampling_set.index_of(z)
    if index is not None and index in used:
        return complex(signal.values[index])
    return None


def kernel_series(model: ModelContract, signal: SampledSignal, z: complex, terms: Optional[int] = None) -> complex:
    """
    Kernel form of the sampling series ``sum_n k(z, x_n) / k(x_n, x_n) f(x_n)``.

    Terms are added by ascending ``|x_n|``, ties toward minus infinity.

    Args:
        model: The model providing the kernel.
        signal: Samples on the sampling set of one extension.
        z: Evaluation point.
        terms: Number of terms, all samples when omitted.

    Returns:
        The truncated series, or the sample itself when ``z`` is a used node.

    Raises:
        ContractViolationException: If more terms are requested than samples exist.
    """
    used = _used_nodes(signal.sampling_set, terms)
    direct = _pass_through(signal, used, z)
    if direct is not None:
        return direct

    total = 0j
    for n in used:
        x = signal.sampling_set.points[n]
        total += model.kernel_value(z, x) * signal.sampling_set.weights[n] * signal.values[n]
    return total


def lagrange_G(gen: LagrangeGenerator, z: complex) -> complex:
    x = gen.anchor
    weight = gen.sampling_set.weights[gen.anchor_index]
    return complex((complex(z) - x) * gen.model.kernel_value(z, x) * weight)


def lagrange_node_derivatives(gen: LagrangeGenerator, indices: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Central differences ``G'(x_n)`` with step ``1e-6 (1 + |x_n|)``.

    The difference quotient divides by the actual distance between the two stepped points.
    """
    points = gen.sampling_set.points
    if indices is None:
        indices = range(len(points))
    derivatives = np.zeros(len(points), dtype=complex)
    for n in indices:
        x = points[n]
        step = DERIVATIVE_STEP * (1 + abs(x))
        upper, lower = x + step, x - step
        derivatives[n] = (lagrange_G(gen, upper) - lagrange_G(gen, lower)) / (upper - lower)
    return derivatives


def lagrange_series(gen: LagrangeGenerator, signal: SampledSignal, z: complex, terms: Optional[int] = None,
                    derivatives: Optional[np.ndarray] = None) -> complex:
    """
    Lagrange form of the sampling series ``sum_n G(z) / ((z - x_n) G'(x_n)) f(x_n)``.

    Args:
        gen: Generator whose zeros are the sampling set of the signal.
        signal: Samples.
        z: Evaluation point.
        terms: Number of terms, all samples when omitted.
        derivatives: Precomputed ``G'(x_n)`` for the whole set, computed here when omitted.

    Returns:
        The truncated series, or the sample itself when ``z`` is a used node.

    Raises:
        ContractViolationException: If more terms are requested than samples exist.
        DegenerateNodeException: If some ``|G'(x_n)|`` is below ``1e-12``, on the scale fixed by ``G'(x_k) = 1``.
    """
    used = _used_nodes(signal.sampling_set, terms)
    direct = _pass_through(signal, used, z)
    if direct is not None:
        return direct
    if len(used) == 0:
        return 0j

    if derivatives is None:
        derivatives = lagrange_node_derivatives(gen, used)
    # G'(anchor) = 1 fixes the scale, so the bound is absolute per node
    magnitudes = np.abs(derivatives[used])
    if np.min(magnitudes) < DEGENERATE_NODE:
        node = signal.sampling_set.points[used[int(np.argmin(magnitudes))]]
        raise DegenerateNodeException(f'Derivative of G vanishes at the node {node}')

    g = lagrange_G(gen, z)
    total = 0j
    for n in used:
        x = signal.sampling_set.points[n]
        total += g / ((complex(z) - x) * derivatives[n]) * signal.values[n]
    return total


def reconstruction_report(model: ModelContract, phi: StateVector, grid: Sequence[complex],
                          schedule: Optional[Sequence[int]] = None, sampling_set: Optional[SamplingSet] = None,
                          anchor_index: Optional[int] = None) -> ReconstructionReport:
    """
    Compares both sampling series with the transform over a grid and a term schedule.

    Args:
        model: The model.
        phi: The state to reconstruct.
        grid: Evaluation points.
        schedule: Non-decreasing term counts, all samples when omitted.
        sampling_set: Explicit sampling set, the default extension's set when omitted.
        anchor_index: Anchor of the Lagrange generator, the node closest to the origin when omitted.

    Returns:
        One row per grid point and term count.

    Raises:
        ContractViolationException: If the schedule decreases or exceeds the samples.
    """
    if sampling_set is None:
        sampling_set = model.extension_family(model.default_extension())
    if schedule is None:
        schedule = [len(sampling_set)]
    schedule = list(schedule)
    if any(later < earlier for earlier, later in zip(schedule, schedule[1:])):
        raise ContractViolationException(f'Term schedule {schedule} decreases')
    for terms in schedule:
        _used_nodes(sampling_set, terms)

    signal = sample(model, phi, sampling_set)
    gen, derivatives = None, None
    if len(sampling_set):
        gen = LagrangeGenerator.default_for(model, sampling_set, anchor_index)
        derivatives = lagrange_node_derivatives(gen)
        logger.debug(f'Lagrange generator anchored at {gen.anchor}')

    rows = []
    for z in grid:
        f_true = transform(model, phi, z)
        for terms in schedule:
            f_kernel = kernel_series(model, signal, z, terms)
            f_lagrange = lagrange_series(gen, signal, z, terms, derivatives) if gen is not None else 0j
            rows.append(ReconstructionRow(
                z=z,
                terms=terms,
                f_true=f_true,
                f_kernel=f_kernel,
                f_lagrange=f_lagrange,
                err_kernel=abs(f_kernel - f_true),
                err_lagrange=abs(f_lagrange - f_true)
            ))

    report = ReconstructionReport(rows=rows, schedule=schedule)
    for terms in schedule:
        kernel_error, lagrange_error = report.max_errors(terms)
        logger.info(f'{terms} terms: max kernel error {kernel_error:.3e}, max Lagrange error {lagrange_error:.3e}')
    return report
