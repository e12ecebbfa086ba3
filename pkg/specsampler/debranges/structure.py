import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from specsampler.core.contract import ModelContract, kernel, transform
from specsampler.core.model import StateVector
from specsampler.debranges.model import ABPair, BlaschkeReport, DominanceReport, EvaluationBoundReport, StarReport, \
    StructureFunction
from specsampler.exception_classes import ContractViolationException

logger = logging.getLogger('App.DeBranges')

EXACT_TOLERANCE = 1e-10
ZERO_XTOL = 1e-12
SCAN_REFINEMENT = 8


def structure_function_eval(sf: StructureFunction, z: complex) -> complex:
    z = complex(z)
    return complex(sf.prefactor * (sf.w0.conjugate() - z) * sf.model.structure_kernel(z, sf.w0))


def ab_split(sf: StructureFunction, z: complex) -> ABPair:
    """
    Splits ``e`` into ``a = (e + e*) / 2`` and ``b = (e - e*) / (2i)`` with ``e*(z) = conj(e(conj z))``.
    """
    value = structure_function_eval(sf, z)
    reflected = structure_function_eval(sf, complex(z).conjugate()).conjugate()
    return ABPair(a_val=(value + reflected) / 2, b_val=(value - reflected) / 2j)


def _check_angle(t: float):
    if not 0 <= t < math.pi:
        raise ContractViolationException(f'Extension parameter t must lie in [0, pi), got {t}')


def st_eval(sf: StructureFunction, t: float, z: complex) -> complex:
    """
    ``s_t(z) = -sin(t) a(z) + cos(t) b(z)``.
    """
    _check_angle(t)
    pair = ab_split(sf, z)
    return complex(-math.sin(t) * pair.a_val + math.cos(t) * pair.b_val)


def st_zeros(sf: StructureFunction, t: float, lo: float, hi: float) -> np.ndarray:
    """
    Real zeros of ``s_t`` in ``[lo, hi]``.

    Sign changes are located on a scan grid with spacing at most an eighth of the model's expected
    gap and refined by Brent's method.

    Raises:
        ContractViolationException: If ``lo >= hi`` or ``t`` is outside ``[0, pi)``.
    """
    _check_angle(t)
    if not lo < hi:
        raise ContractViolationException(f'Empty interval [{lo}, {hi}]')

    spacing = sf.model.expected_gap() / SCAN_REFINEMENT
    count = int(math.ceil((hi - lo) / spacing)) + 1
    grid = np.linspace(lo, hi, count)

    def s(x: float) -> float:
        return st_eval(sf, t, x).real

    values = [s(x) for x in grid]
    zeros = []
    for i, x in enumerate(grid):
        if values[i] == 0:
            zeros.append(float(x))
        elif i + 1 < len(grid) and values[i] * values[i + 1] < 0:
            zeros.append(float(brentq(s, x, grid[i + 1], xtol=ZERO_XTOL)))
    logger.debug(f'{len(zeros)} zeros of s_t for t={t} in [{lo}, {hi}] from {count} scan points')
    return np.array(zeros)


def axiom_blaschke_check(model: ModelContract, h: StateVector, w: complex,
                         tol: float = EXACT_TOLERANCE) -> BlaschkeReport:
    """
    Norms of ``(z - w) h_hat`` and ``(z - conj w) h_hat`` must agree.

    Raises:
        ContractViolationException: If ``w`` is real or the model has no multiplication operator.
        DegreeOverflowException: If the products leave the space.
    """
    w = complex(w)
    if w.imag == 0:
        raise ContractViolationException(f'Blaschke point {w} must be non-real')
    f = model.multiply(h, w)
    g = model.multiply(h, w.conjugate())
    f_norm, g_norm = f.norm(), g.norm()
    ratio = g_norm / f_norm if f_norm > 0 else 1.0
    in_space = len(f) == model.dimension and len(g) == model.dimension
    return BlaschkeReport(in_space=in_space, norm_ratio=ratio, passed=in_space and abs(ratio - 1) <= tol)


def default_star_grid() -> list[complex]:
    return [complex(x, y) for x in np.linspace(-2, 2, 5) for y in np.linspace(-1, 1, 3)]


def axiom_star_check(model: ModelContract, phi: StateVector, grid: Optional[Sequence[complex]] = None,
                     tol: float = EXACT_TOLERANCE) -> StarReport:
    """
    Checks ``transform(conj phi, z) = conj(transform(phi, conj z))`` and norm invariance.

    Raises:
        ContractViolationException: If the model's transform is not real.
    """
    if not model.is_real:
        raise ContractViolationException(f'Model "{model.basis_tag}" is not real in its reference basis')
    if grid is None:
        grid = default_star_grid()
    star = phi.conjugate()
    max_error = 0.0
    for z in grid:
        z = complex(z)
        scale = max(1.0, phi.norm() * math.sqrt(kernel(model, z, z).real))
        error = abs(transform(model, star, z) - transform(model, phi, z.conjugate()).conjugate()) / scale
        max_error = max(max_error, error)
    norm_error = abs(star.norm() - phi.norm())
    return StarReport(max_error=max_error, norm_error=norm_error, points=len(grid),
                      passed=max_error <= tol and norm_error <= tol)


def evaluation_bound_check(model: ModelContract, phi: StateVector, w: complex) -> EvaluationBoundReport:
    """
    Cauchy-Schwarz bound ``|phi_hat(w)| <= sqrt(k(w, w)) |phi|`` with slack ``1e-10 max(1, bound)``.
    """
    value = abs(transform(model, phi, w))
    bound = math.sqrt(max(kernel(model, w, w).real, 0.0)) * phi.norm()
    ratio = value / bound if bound > 0 else 0.0
    return EvaluationBoundReport(value=value, bound=bound, ratio=ratio,
                                 holds=value <= bound + EXACT_TOLERANCE * max(1.0, bound))


def half_plane_dominance_scan(sf: StructureFunction, grid: Sequence[complex]) -> DominanceReport:
    """
    Counts grid points ``z`` in the half-plane of ``w0`` with ``|e(z)| > |e(conj z)|``.

    Points on the real axis and in the other half-plane are ignored.
    """
    sign = 1 if sf.w0.imag > 0 else -1
    points = [complex(z) for z in grid if complex(z).imag * sign > 0]
    dominated = sum(
        1 for z in points
        if abs(structure_function_eval(sf, z)) > abs(structure_function_eval(sf, z.conjugate()))
    )
    report = DominanceReport(half_plane='upper' if sign > 0 else 'lower', points=len(points), dominated=dominated)
    logger.info(f'Dominance in the {report.half_plane} half-plane at {dominated} of {len(points)} points')
    return report
