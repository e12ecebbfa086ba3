import logging
import math

import numpy as np
from rich.pretty import pretty_repr
from scipy.linalg import solve_banded

from specsampler.core.contract import ModelContract
from specsampler.core.model import ExtensionParameter, SamplingSet, StateVector, machine_epsilon
from specsampler.exception_classes import ContractViolationException, DegreeOverflowException, \
    SingularSolveException
from specsampler.jacobi.model import BoundaryAngle, JacobiCoefficients, LimitCircleReport, OrthoPolyEval
from specsampler.tridiag import numerics
from specsampler.tridiag.model import TridiagMatrix

logger = logging.getLogger('App.Jacobi')

RESCALE_THRESHOLD = 1e150
CONFLUENT_THRESHOLD = 1e-8
EIGENVALUE_TOL = 1e-14


def _evaluate(b: np.ndarray, q: np.ndarray, n: int, z: complex, derivatives: bool = False):
    """
    Three-term recurrence for ``P_0, ..., P_n`` and optionally their derivatives.

    Whenever the largest magnitude passes the rescale threshold every stored value is divided by
    it, so all returned values share the single factor ``exp(log_scale)``.
    """
    z = complex(z)
    values = [0j] * (n + 1)
    slopes = [0j] * (n + 1)
    values[0] = 1 + 0j
    log_scale = 0.0
    if n >= 1:
        values[1] = (z - q[0]) / b[0]
        slopes[1] = 1 / b[0]
    for k in range(1, n):
        values[k + 1] = ((z - q[k]) * values[k] - b[k - 1] * values[k - 1]) / b[k]
        if derivatives:
            slopes[k + 1] = (values[k] + (z - q[k]) * slopes[k] - b[k - 1] * slopes[k - 1]) / b[k]
        magnitude = max(abs(values[k + 1]), abs(values[k]), abs(slopes[k + 1]))
        if magnitude > RESCALE_THRESHOLD:
            values = [v / magnitude for v in values]
            slopes = [s / magnitude for s in slopes]
            log_scale += math.log(magnitude)
    return np.array(values), np.array(slopes), log_scale


def _coefficients(c: JacobiCoefficients, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 1:
        raise ContractViolationException(f'Truncation size must be at least 1, got {n}')
    return c.off_diagonal(n), c.diagonal(n)


def eval_ortho_polys(c: JacobiCoefficients, n: int, z: complex) -> OrthoPolyEval:
    """
    Evaluates the orthogonal polynomials of the first kind ``P_0(z), ..., P_N(z)``.

    Args:
        c: Recurrence coefficients, at least ``b_1..b_N`` and ``q_1..q_N``.
        n: Highest degree N.
        z: Evaluation point.

    Returns:
        The scaled values and their common log scale.
    """
    b, q = _coefficients(c, n)
    values, _, log_scale = _evaluate(b, q, n, z)
    return OrthoPolyEval(values=values, log_scale=log_scale)


def cd_kernel(c: JacobiCoefficients, n: int, z: complex, w: complex) -> complex:
    """
    Christoffel-Darboux form of ``K_N(z, w) = sum_{k<N} P_k(z) P_k(w)``.

    Close arguments use the confluent form at their midpoint.
    """
    b, q = _coefficients(c, n)
    z, w = complex(z), complex(w)
    if abs(z - w) < CONFLUENT_THRESHOLD * (1 + abs(z)):
        values, slopes, log_scale = _evaluate(b, q, n, 0.5 * (z + w), derivatives=True)
        scaled = b[n - 1] * (slopes[n] * values[n - 1] - slopes[n - 1] * values[n])
        return complex(scaled * np.exp(2 * log_scale))

    z_values, _, z_scale = _evaluate(b, q, n, z)
    w_values, _, w_scale = _evaluate(b, q, n, w)
    scaled = b[n - 1] * (z_values[n] * w_values[n - 1] - z_values[n - 1] * w_values[n]) / (z - w)
    return complex(scaled * np.exp(z_scale + w_scale))


def boundary_function(c: JacobiCoefficients, n: int, angle: BoundaryAngle, x: complex) -> complex:
    """
    ``cos(tau) b_N P_N(x) - sin(tau) P_{N-1}(x)``, whose zeros form the spectrum of the angle.
    """
    b, q = _coefficients(c, n)
    values, _, log_scale = _evaluate(b, q, n, x)
    scaled = angle.cos * b[n - 1] * values[n] - angle.sin * values[n - 1]
    return complex(scaled * np.exp(log_scale))


def truncation(c: JacobiCoefficients, n: int, angle: BoundaryAngle) -> TridiagMatrix:
    """
    The N x N truncation with last diagonal entry ``q_N + tan(tau)``.

    Raises:
        ContractViolationException: For the decoupled angle, which has no finite matrix.
    """
    b, q = _coefficients(c, n)
    diag = np.array(q)
    diag[-1] += angle.tan
    return TridiagMatrix(diag=diag, offdiag=b[:n - 1])


def kernel_diagonal(c: JacobiCoefficients, n: int, points: np.ndarray) -> np.ndarray:
    """
    Direct sums ``K_N(x, x) = sum_{k<N} P_k(x)^2`` at real points.
    """
    b, q = _coefficients(c, n)
    norms = np.empty(len(points))
    for i, x in enumerate(points):
        values, _, log_scale = _evaluate(b, q, n - 1, x)
        norms[i] = float(np.sum(np.abs(values[:n]) ** 2)) * np.exp(2 * log_scale)
    return norms


def sampling_set(c: JacobiCoefficients, n: int, angle: BoundaryAngle) -> SamplingSet:
    """
    Spectrum of the boundary-angle truncation as a sampling set.

    For ``tau != pi/2`` the N eigenvalues of the shifted truncation; for the decoupled angle the
    N - 1 eigenvalues of the leading section.

    Args:
        c: Recurrence coefficients.
        n: Truncation size N.
        angle: Boundary angle.

    Returns:
        Points, kernel norms ``K_N(x_n, x_n)`` and weights.
    """
    b, q = _coefficients(c, n)
    if angle.decoupled:
        if n == 1:
            points = np.empty(0)
        else:
            section = TridiagMatrix(diag=q[:n - 1], offdiag=b[:n - 2])
            points = numerics.eigenvalues(section, EIGENVALUE_TOL)
    else:
        points = numerics.eigenvalues(truncation(c, n, angle), EIGENVALUE_TOL)

    logger.info(f'Sampling set for N={n}, {angle.label()}: {len(points)} points')
    norms = kernel_diagonal(c, n, points)
    return SamplingSet.from_kernel_norms(points, norms, extension_param=angle)


def place_sampling_point(c: JacobiCoefficients, n: int, x_star: float) -> BoundaryAngle:
    """
    Boundary angle whose spectrum contains ``x_star``.

    Returns:
        ``atan2(b_N P_N(x*), P_{N-1}(x*))`` folded into ``[0, pi)``.
    """
    b, q = _coefficients(c, n)
    values, _, _ = _evaluate(b, q, n, x_star)
    tau = math.atan2(b[n - 1] * values[n].real, values[n - 1].real)
    if tau < 0:
        tau += math.pi
    if tau >= math.pi:
        tau -= math.pi
    logger.info(f'Point {x_star} placed at tau={tau}')
    return BoundaryAngle(tau=tau + 0.0)


def _log_sum_squares(values: np.ndarray, log_scale: float) -> float:
    total = float(np.sum(np.abs(values) ** 2))
    return math.log(total) + 2 * log_scale if total > 0 else -math.inf


def limit_circle_diagnostic(c: JacobiCoefficients, z: complex, k_max: int, tol: float) -> LimitCircleReport:
    """
    Numerical test for square summability of ``P_k(z)``.

    Partial sums ``S_K = sum_{k<=K} |P_k(z)|^2`` are compared at ``K_max/4``, ``K_max/2`` and
    ``K_max`` in the log domain, so divergent growth produces a report instead of an overflow.

    Raises:
        ContractViolationException: If ``K_max < 8`` or ``tol`` is not positive.
    """
    if k_max < 8:
        raise ContractViolationException(f'K_max must be at least 8, got {k_max}')
    if not tol > 0:
        raise ContractViolationException(f'Tolerance must be positive, got {tol}')

    b, q = _coefficients(c, k_max)
    checkpoints = [k_max // 4, k_max // 2, k_max]
    log_sums = []
    for checkpoint in checkpoints:
        values, _, log_scale = _evaluate(b, q, checkpoint, z)
        log_sums.append(_log_sum_squares(values, log_scale))
    quarter, half, full = log_sums

    relative_increment = -math.expm1(half - full)
    previous_increment = -math.expm1(quarter - half)
    if previous_increment <= 0:
        increment_ratio = math.inf if relative_increment > 0 else 0.0
    elif full - half > 700:
        increment_ratio = math.inf
    else:
        increment_ratio = float(np.exp(full - half)) * relative_increment / previous_increment

    report = LimitCircleReport(
        converged=relative_increment < tol,
        checkpoints=checkpoints,
        partial_sums=[math.exp(s) if s < 709 else math.inf for s in log_sums],
        log_partial_sums=log_sums,
        relative_increment=relative_increment,
        increment_ratio=increment_ratio,
        tolerance=tol
    )
    logger.debug(f'Limit circle diagnostic at z={z}: {pretty_repr(report.model_dump())}')
    return report


def gauss_quadrature(c: JacobiCoefficients, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    N-point Gauss rule of the spectral measure of ``delta_1``: the ``tau = 0`` sampling set.
    """
    nodes = sampling_set(c, n, BoundaryAngle(tau=0.0))
    return np.array(nodes.points), np.array(nodes.weights)


class JacobiModel(ModelContract):
    """
    Finite Jacobi model: polynomials of degree below N with the boundary-angle truncations as
    the extension family.

    Attributes:
        coefficients: Recurrence coefficients.
        n: Truncation size N.
    """

    def __init__(self, coefficients: JacobiCoefficients, n: int):
        self.coefficients = coefficients
        self.n = n
        self._b, self._q = _coefficients(coefficients, n)
        self.matrix = TridiagMatrix(diag=self._q, offdiag=self._b[:n - 1])

    @property
    def basis_tag(self) -> str:
        return f'jacobi-delta(N={self.n})'

    @property
    def dimension(self) -> int:
        return self.n

    @property
    def supports_gauge(self) -> bool:
        return True

    @property
    def is_real(self) -> bool:
        return True

    def gauge(self) -> StateVector:
        return StateVector.basis_vector(0, self.n, self.basis_tag)

    def __scaled(self, z: complex) -> tuple[np.ndarray, float]:
        values, _, log_scale = _evaluate(self._b, self._q, self.n - 1, z)
        return values[:self.n], log_scale

    def basis_functions(self, z: complex) -> np.ndarray:
        values, log_scale = self.__scaled(z)
        return values * np.exp(log_scale)

    def kernel_value(self, z: complex, w: complex) -> complex:
        z_values, z_scale = self.__scaled(z)
        w_values, w_scale = self.__scaled(w)
        return complex(np.sum(z_values * np.conj(w_values)) * np.exp(z_scale + w_scale))

    def __angle(self, param: ExtensionParameter) -> BoundaryAngle:
        if not isinstance(param, BoundaryAngle):
            raise ContractViolationException(f'Jacobi extensions take a boundary angle, got {param!r}')
        return param

    def extension_family(self, param: ExtensionParameter) -> SamplingSet:
        return sampling_set(self.coefficients, self.n, self.__angle(param))

    def default_extension(self) -> BoundaryAngle:
        return BoundaryAngle(tau=0.0)

    def extension_parameters(self, count: int) -> list[BoundaryAngle]:
        return [BoundaryAngle(tau=j * math.pi / count) for j in range(count)]

    def expected_gap(self) -> float:
        points = np.concatenate([
            sampling_set(self.coefficients, self.n, BoundaryAngle(tau=0.0)).points,
            sampling_set(self.coefficients, self.n, BoundaryAngle(tau=math.pi / 2)).points
        ])
        if len(points) < 2:
            return 1.0
        return float(np.min(np.diff(np.sort(points))))

    def resolvent_solve(self, param: ExtensionParameter, z: complex, rhs: np.ndarray) -> np.ndarray:
        """
        Solves ``(A_tau - z) x = rhs`` for the truncation of the given angle.

        The decoupled angle uses the limiting resolvent ``(J_{N-1} - z)^{-1}`` on the leading
        coordinates and zero on the last one.

        Raises:
            SingularSolveException: If ``z`` lies in the spectrum of the extension.
        """
        angle = self.__angle(param)
        spectrum = sampling_set(self.coefficients, self.n, angle)
        if len(spectrum) and np.min(np.abs(spectrum.points - z)) <= 64 * machine_epsilon * self.matrix.scale:
            raise SingularSolveException(f'{z} lies in the spectrum of {angle.label()}')

        rhs = np.asarray(rhs, dtype=complex)
        solution = np.zeros(self.n, dtype=complex)
        if angle.decoupled:
            if self.n > 1:
                section = self.matrix.leading_section(self.n - 1)
                solution[:-1] = solve_banded((1, 1), section.banded(z), rhs[:-1])
            return solution
        return solve_banded((1, 1), truncation(self.coefficients, self.n, angle).banded(z), rhs)

    def defect_representative(self, param: ExtensionParameter, vector: np.ndarray, z: complex) -> np.ndarray:
        """
        The decoupled resolvent leaves the last coordinate undetermined; it is fixed by the row
        ``N - 1`` equation of ``(J - z) v = 0``.
        """
        if not self.__angle(param).decoupled or self.n < 2:
            return vector
        vector = np.array(vector, dtype=complex)
        k = self.n - 2
        previous = self._b[k - 1] * vector[k - 1] if k > 0 else 0
        vector[k + 1] = ((z - self._q[k]) * vector[k] - previous) / self._b[k]
        return vector

    def defect_vector(self, z0: complex) -> np.ndarray:
        """
        Unit element ``pi(z0) / |pi(z0)|`` of ``Ker(A* - z0)``.
        """
        values = self.basis_functions(z0)
        return values / np.linalg.norm(values)

    def multiply(self, h: StateVector, w: complex) -> StateVector:
        """
        Coefficients of ``(z - w) h_hat(z)``, that is ``(J_N - w) h``.

        Raises:
            DegreeOverflowException: If the top coefficient of ``h`` is not zero.
        """
        self.check_state(h)
        if h.coeffs[-1] != 0:
            raise DegreeOverflowException('The product leaves the space: top coefficient of h is not zero')
        coeffs = self.matrix.diag * h.coeffs - w * h.coeffs
        coeffs[:-1] += self.matrix.offdiag * h.coeffs[1:]
        coeffs[1:] += self.matrix.offdiag * h.coeffs[:-1]
        return StateVector(coeffs=coeffs, basis_tag=self.basis_tag)
