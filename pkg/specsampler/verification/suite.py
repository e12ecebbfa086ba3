import math
from typing import Optional

import numpy as np

from specsampler import config
from specsampler.core.contract import ModelContract, build_xi_from_psi, kernel, parseval_inner, reproducing_check, \
    spectral_measure, transform
from specsampler.core.model import KernelVectorSpec, StateVector
from specsampler.debranges.model import StructureFunction
from specsampler.debranges.structure import ab_split, axiom_blaschke_check, axiom_star_check, \
    evaluation_bound_check, half_plane_dominance_scan, st_eval, st_zeros
from specsampler.jacobi.model import BoundaryAngle, JacobiCoefficients
from specsampler.jacobi.operator import JacobiModel, cd_kernel, eval_ortho_polys, limit_circle_diagnostic, \
    place_sampling_point, sampling_set, truncation
from specsampler.paley_wiener.model import PWConfig, PhaseParameter
from specsampler.paley_wiener.operator import PaleyWienerModel, _basis_values, pw_sampling_points
from specsampler.planner.support import DisplayMessages, GroupResult, VerificationGroup
from specsampler.reconstruct.engine import kernel_series, lagrange_node_derivatives, lagrange_series, sample
from specsampler.reconstruct.model import LagrangeGenerator
from specsampler.tridiag import numerics
from specsampler.tridiag.model import TridiagMatrix


def random_coefficients(rng: np.random.Generator, n: int) -> JacobiCoefficients:
    return JacobiCoefficients(b=rng.uniform(0.5, 1.5, n), q=rng.uniform(-0.5, 0.5, n))


def random_matrix(rng: np.random.Generator, n: int) -> TridiagMatrix:
    return TridiagMatrix(diag=rng.uniform(-1, 1, n), offdiag=rng.uniform(0.2, 1.5, n - 1))


def random_state(rng: np.random.Generator, model: ModelContract, top_free: bool = False) -> StateVector:
    coeffs = rng.normal(size=model.dimension) + 1j * rng.normal(size=model.dimension)
    if top_free:
        coeffs[-1] = 0
    return StateVector(coeffs=coeffs, basis_tag=model.basis_tag)


def random_angle(rng: np.random.Generator) -> BoundaryAngle:
    return BoundaryAngle(tau=float(rng.uniform(0, math.pi)))


def random_grid(rng: np.random.Generator, count: int, radius: float) -> list[complex]:
    radii = radius * np.sqrt(rng.uniform(0, 1, count))
    angles = rng.uniform(0, 2 * math.pi, count)
    return [complex(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)]


def cauchy_schwarz_scale(model: ModelContract, phi: StateVector, z: complex) -> float:
    return max(1.0, phi.norm() * math.sqrt(abs(kernel(model, z, z))))


def characteristic_roots(m: TridiagMatrix) -> np.ndarray:
    """
    Roots of the expanded characteristic polynomial, the dense oracle for the bisection solver.
    """
    previous = np.array([1.0])
    current = np.array([1.0, -m.diag[0]])
    for k in range(1, m.size):
        following = np.polysub(np.polymul([1.0, -m.diag[k]], current), m.offdiag[k - 1] ** 2 * previous)
        previous, current = current, following
    return np.sort(np.roots(current).real)


def check_eigen_oracle(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    for _ in range(50):
        m = random_matrix(rng, int(rng.integers(1, 9)))
        worst = max(worst, float(np.max(np.abs(numerics.eigenvalues(m) - characteristic_roots(m)))))
    return GroupResult(max_error=worst, detail='50 matrices, N <= 8')


def check_sturm_structure(rng: np.random.Generator, tol: float) -> GroupResult:
    holds = True
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 13))
        m = random_matrix(rng, n)
        values = numerics.eigenvalues(m)
        section = numerics.eigenvalues(m.leading_section(n - 1))
        holds &= bool(np.all(values[:-1] < section) and np.all(section < values[1:]))
        lo, hi = m.gershgorin_bounds()
        counts = [numerics.sturm_count(m, x) for x in np.linspace(lo - 1, hi + 1, 200)]
        holds &= bool(np.all(np.diff(counts) >= 0)) and counts[0] == 0 and counts[-1] == n
        for x in values:
            vector = numerics.eigvec_by_recurrence(m, x)
            residual = np.linalg.norm(m.apply(vector) - x * vector) / np.linalg.norm(vector)
            worst = max(worst, float(residual))
    return GroupResult(max_error=worst, conditions_hold=holds, detail='interlacing, monotone counts, residuals')


def check_christoffel_darboux(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        c = random_coefficients(rng, n)
        z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        w = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        pz = eval_ortho_polys(c, n, z).unscaled()[:n]
        pw = eval_ortho_polys(c, n, w).unscaled()[:n]
        direct = np.sum(pz * pw)
        error = abs(cd_kernel(c, n, z, w) - direct) / float(np.sum(np.abs(pz * pw)))
        worst = max(worst, error)
    return GroupResult(max_error=worst, detail='1000 pairs, N <= 32, relative to sum |P_k(z) P_k(w)|')


def check_jacobi_properties(rng: np.random.Generator, tol: float) -> GroupResult:
    """
    Eigenvector consistency, orthogonality and gauge identity of the kernel vectors.
    """
    worst = 0.0
    holds = True
    for _ in range(20):
        n = int(rng.integers(2, 13))
        c = random_coefficients(rng, n)
        model = JacobiModel(c, n)
        angle = random_angle(rng)
        points = sampling_set(c, n, angle).points
        vectors = np.array([model.xi(x).coeffs for x in points])
        holds &= bool(np.all(vectors[:, 0] == 1))
        matrix = truncation(c, n, angle)
        for x in points:
            numerics.eigvec_by_recurrence(matrix, x)
        unit = vectors / np.linalg.norm(vectors, axis=1)[:, None]
        gram = unit @ unit.conj().T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(points))))))
    return GroupResult(max_error=worst, conditions_hold=holds, detail='orthogonality of normalised xi(x_n)')


def check_kernel_properties(rng: np.random.Generator, tol: float) -> GroupResult:
    """
    Hermitian symmetry, positivity on the real line, analyticity and gauge normalisation.
    """
    worst = 0.0
    holds = True
    c = random_coefficients(rng, 8)
    models = [JacobiModel(c, 8), PaleyWienerModel(PWConfig(a=2 * math.pi, basis_cutoff=8), window=8)]
    for model in models:
        for z, w in zip(random_grid(rng, 20, 3), random_grid(rng, 20, 3)):
            scale = max(1.0, math.sqrt(abs(kernel(model, z, z)) * abs(kernel(model, w, w))))
            worst = max(worst, abs(kernel(model, z, w) - kernel(model, w, z).conjugate()) / scale)
        phi = random_state(rng, model)
        step = 1e-5
        for z in random_grid(rng, 10, 2):
            dx = (transform(model, phi, z + step) - transform(model, phi, z - step)) / (2 * step)
            dy = (transform(model, phi, z + 1j * step) - transform(model, phi, z - 1j * step)) / (2j * step)
            holds &= abs(dx - dy) <= 1e-6 * cauchy_schwarz_scale(model, phi, z)

    jacobi = models[0]
    holds &= all(kernel(jacobi, x, x).real > 0 for x in rng.uniform(-10, 10, 1000))
    gauge = jacobi.gauge()
    for z in random_grid(rng, 20, 5):
        worst = max(worst, abs(transform(jacobi, gauge, z) - 1))
    return GroupResult(max_error=worst, conditions_hold=holds, detail='Hermitian, positive, analytic, gauge')


def check_kernel_vector_independence(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 9))
        model = JacobiModel(random_coefficients(rng, n), n)
        z0 = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        spec = KernelVectorSpec(z0=z0, psi0_coeffs=model.defect_vector(z0))
        ext_a, ext_b = random_angle(rng), BoundaryAngle(tau=math.pi / 2) if rng.uniform() < 0.3 else random_angle(rng)
        z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        xi = build_xi_from_psi(model, spec, ext_a, ext_b, z)
        expected = model.xi(z).coeffs
        worst = max(worst, float(np.linalg.norm(xi.coeffs - expected)) / max(1.0, float(np.linalg.norm(expected))))
    return GroupResult(max_error=worst, detail='kernel vector from two extensions vs conj(P_k(z))')


def check_exact_sampling(rng: np.random.Generator, tol: float) -> GroupResult:
    """
    Full-term kernel and Lagrange series on random finite Jacobi models, plus the anchor normalisation.
    """
    kernel_worst, lagrange_worst, anchor_worst = 0.0, 0.0, 0.0
    for _ in range(50):
        n = int(rng.integers(2, 17))
        model = JacobiModel(random_coefficients(rng, n), n)
        points = model.extension_family(random_angle(rng))
        phi = random_state(rng, model)
        signal = sample(model, phi, points)
        gen = LagrangeGenerator.default_for(model, points)
        derivatives = lagrange_node_derivatives(gen)
        anchor_worst = max(anchor_worst, abs(derivatives[gen.anchor_index] - 1))
        for z in random_grid(rng, 20, 5):
            truth = transform(model, phi, z)
            scale = cauchy_schwarz_scale(model, phi, z)
            by_kernel = kernel_series(model, signal, z)
            by_lagrange = lagrange_series(gen, signal, z, derivatives=derivatives)
            kernel_worst = max(kernel_worst, abs(by_kernel - truth) / scale)
            lagrange_worst = max(lagrange_worst, abs(by_lagrange - by_kernel) / scale)
    return GroupResult(
        max_error=max(kernel_worst, lagrange_worst, anchor_worst),
        detail=f'kernel {kernel_worst:.1e}, Lagrange {lagrange_worst:.1e}, G\'(x_k) {anchor_worst:.1e}'
    )


def check_parseval(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 13))
        model = JacobiModel(random_coefficients(rng, n), n)
        measure = spectral_measure(model, random_angle(rng))
        phi, eta = random_state(rng, model), random_state(rng, model)
        expected = phi.inner(eta)
        worst = max(worst, abs(parseval_inner(model, phi, eta, measure) - expected) / (phi.norm() * eta.norm()))
        w = float(rng.uniform(-3, 3))
        worst = max(worst, reproducing_check(model, w, measure, phi) / cauchy_schwarz_scale(model, phi, w))

    cfg = PWConfig(a=2 * math.pi, basis_cutoff=8)
    for window in (8, 12):
        model = PaleyWienerModel(cfg, window)
        measure = spectral_measure(model)
        phi, eta = random_state(rng, model), random_state(rng, model)
        worst = max(worst, abs(parseval_inner(model, phi, eta, measure) - phi.inner(eta)) / (phi.norm() * eta.norm()))
    return GroupResult(max_error=worst, detail='100 Jacobi pairs, reproducing property, PW windows 8 and 12')


def check_placement(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    decoupled = 0
    cases = []
    for _ in range(100):
        n = int(rng.integers(2, 11))
        cases.append((random_coefficients(rng, n), n, float(rng.uniform(-3, 3))))
    for n in (2, 4, 6):
        cases.append((JacobiCoefficients.from_rule('free'), n, 0.0))
    for c, n, x_star in cases:
        angle = place_sampling_point(c, n, x_star)
        decoupled += angle.decoupled
        points = sampling_set(c, n, angle).points
        worst = max(worst, float(np.min(np.abs(points - x_star))) if len(points) else math.inf)
    return GroupResult(max_error=worst, conditions_hold=decoupled >= 3,
                       detail=f'{len(cases)} placements, {decoupled} decoupled')


def check_pw_lattice(rng: np.random.Generator, tol: float) -> GroupResult:
    worst = 0.0
    for cfg in (PWConfig(a=2 * math.pi, basis_cutoff=8), PWConfig(a=1.0, basis_cutoff=4)):
        model = PaleyWienerModel(cfg, cfg.basis_cutoff)
        lattice = cfg.reference_points()
        table = np.array([_basis_values(cfg, x) for x in lattice])
        worst = max(worst, float(np.max(np.abs(table - math.sqrt(cfg.a) * np.eye(cfg.dimension)))))

        reference = pw_sampling_points(cfg, model.default_extension(), cfg.basis_cutoff)
        mode = int(rng.integers(0, cfg.dimension))
        phi = StateVector.basis_vector(mode, cfg.dimension, cfg.basis_tag)
        signal = sample(model, phi, reference)
        for z in random_grid(rng, 10, 3):
            error = abs(kernel_series(model, signal, z) - transform(model, phi, z))
            worst = max(worst, error / cauchy_schwarz_scale(model, phi, z))
    return GroupResult(max_error=worst, detail='biorthogonality and single-mode reconstruction')


def pw_convergence_errors(windows: tuple[int, ...] = (8, 64), cutoff: int = 32,
                          grid: Optional[np.ndarray] = None) -> list[float]:
    """
    Max errors of the kernel series from half-period-shifted samples for several windows.
    """
    cfg = PWConfig(a=2 * math.pi, basis_cutoff=cutoff)
    coeffs = 1.0 / (1.0 + np.abs(cfg.modes()))
    phi = StateVector(coeffs=coeffs, basis_tag=cfg.basis_tag)
    if grid is None:
        grid = np.linspace(-3.1, 3.1, 13)
    errors = []
    for window in windows:
        model = PaleyWienerModel(cfg, window)
        signal = sample(model, phi, model.extension_family(PhaseParameter(theta=math.pi)))
        errors.append(max(abs(kernel_series(model, signal, z) - transform(model, phi, z)) for z in grid))
    return errors


def check_pw_convergence(rng: np.random.Generator, tol: float) -> GroupResult:
    coarse, fine = pw_convergence_errors()
    return GroupResult(max_error=fine / coarse, detail=f'window 8: {coarse:.2e}, window 64: {fine:.2e}')


def check_debranges_axioms(rng: np.random.Generator, tol: float) -> GroupResult:
    blaschke_worst, star_worst = 0.0, 0.0
    holds = True
    for _ in range(100):
        n = int(rng.integers(2, 13))
        model = JacobiModel(random_coefficients(rng, n), n)
        w = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))
        blaschke = axiom_blaschke_check(model, random_state(rng, model, top_free=True), w)
        blaschke_worst = max(blaschke_worst, abs(blaschke.norm_ratio - 1))
        holds &= blaschke.in_space

        phi = random_state(rng, model)
        star = axiom_star_check(model, phi, random_grid(rng, 10, 3))
        star_worst = max(star_worst, star.max_error, star.norm_error)
        holds &= evaluation_bound_check(model, phi, random_grid(rng, 1, 3)[0]).holds
    return GroupResult(max_error=max(blaschke_worst, star_worst), conditions_hold=holds,
                       detail=f'Blaschke {blaschke_worst:.1e}, star {star_worst:.1e}, evaluation bound')


def check_structure_correspondence(rng: np.random.Generator, tol: float) -> GroupResult:
    """
    Zeros of ``s_t`` against extension spectra, reality on the real line, and half-plane dominance.
    """
    worst = 0.0
    holds = True
    for _ in range(5):
        n = int(rng.integers(3, 9))
        c = random_coefficients(rng, n)
        model = JacobiModel(c, n)
        sf = StructureFunction(model=model)
        t = float(rng.uniform(0, math.pi))
        lo, hi = model.matrix.gershgorin_bounds()
        zeros = st_zeros(sf, t, lo, hi)
        holds &= len(zeros) > 0
        if not len(zeros):
            continue
        points = sampling_set(c, n, place_sampling_point(c, n, zeros[0])).points
        points = points[(points >= lo) & (points <= hi)]
        if len(points) != len(zeros):
            holds = False
            continue
        worst = max(worst, float(np.max(np.abs(points - zeros))))

        for x in rng.uniform(lo, hi, 5):
            pair = ab_split(sf, x)
            scale = max(1.0, abs(pair.e_val))
            worst = max(worst, abs(pair.a_val.imag) / scale, abs(pair.b_val.imag) / scale)
            worst = max(worst, abs(st_eval(sf, 0.0, x) - pair.b_val) / scale)
            worst = max(worst, abs(st_eval(sf, math.pi / 2, x) + pair.a_val) / scale)
        holds &= half_plane_dominance_scan(sf, random_grid(rng, 20, 3)).fraction == 1.0

    for a in (2 * math.pi, 1.0):
        sf = StructureFunction(model=PaleyWienerModel(PWConfig(a=a, basis_cutoff=4), window=4))
        t = float(rng.uniform(0, math.pi))
        gap = 2 * math.pi / a
        zeros = st_zeros(sf, t, -3 * gap, 3 * gap)
        holds &= len(zeros) >= 5
        if len(zeros) >= 2:
            worst = max(worst, float(np.max(np.abs(np.diff(zeros) - gap))))
    return GroupResult(max_error=worst, conditions_hold=holds, detail='5 random t on Jacobi, PW progressions')


def check_limit_circle(rng: np.random.Generator, tol: float) -> GroupResult:
    k_max, lc_tol = config.limit_circle_kmax, config.limit_circle_tol
    steep = limit_circle_diagnostic(JacobiCoefficients.from_rule('power:6'), 1j, k_max, lc_tol)
    square = limit_circle_diagnostic(JacobiCoefficients.from_rule('power:2'), 1j, k_max, 1e-2)
    free = limit_circle_diagnostic(JacobiCoefficients.from_rule('free'), 0j, k_max, lc_tol)
    holds = steep.converged and square.converged and square.increment_ratio < 1 and not free.converged
    return GroupResult(
        max_error=steep.relative_increment,
        conditions_hold=holds,
        detail=f'power:6 {steep.relative_increment:.1e}, power:2 ratio {square.increment_ratio:.2f}, '
               f'free ratio {free.increment_ratio:.2f}'
    )


def _group(name: str, runner, tolerance: float, description: str) -> VerificationGroup:
    return VerificationGroup(
        name=name,
        runner=runner,
        tolerance=tolerance,
        display_messages=DisplayMessages(
            ongoing_message=f'Checking {name}',
            success_message=f'{name} holds',
            failure_message=f'{name} violated',
            description=description,
            failure_instructions=f'Rerun with the same seed and inspect the log file for the failing {name} trial.'
        )
    )


def build_suite() -> list[VerificationGroup]:
    return [
        _group('eigenvalue oracle', check_eigen_oracle, 1e-9,
               'Bisection eigenvalues against roots of the characteristic polynomial.'),
        _group('sturm structure', check_sturm_structure, 1e-8,
               'Interlacing with the leading section, monotone Sturm counts, recurrence eigenvectors.'),
        _group('christoffel-darboux', check_christoffel_darboux, 1e-12,
               'Christoffel-Darboux quotient against the direct sum.'),
        _group('jacobi kernel vectors', check_jacobi_properties, 1e-10,
               'Kernel vectors at the points of one sampling set are orthogonal eigenvectors.'),
        _group('kernel properties', check_kernel_properties, 1e-10,
               'Hermitian kernel, positive diagonal, analytic transform, gauge transform equal to one.'),
        _group('extension independence', check_kernel_vector_independence, 1e-10,
               'The kernel vector built from the defect family does not depend on the extension.'),
        _group('finite sampling', check_exact_sampling, 1e-9,
               'Full kernel and Lagrange series reproduce the transform of random states.'),
        _group('parseval', check_parseval, 1e-10,
               'Inner products from spectral measures equal coefficient inner products.'),
        _group('point placement', check_placement, 1e-8,
               'Every real point belongs to the spectrum of some boundary angle.'),
        _group('pw lattice', check_pw_lattice, 1e-12,
               'Reference modes are biorthogonal on the lattice and reconstruct in one term.'),
        _group('pw convergence', check_pw_convergence, 0.5,
               'Shifted-lattice reconstruction improves from window 8 to window 64.'),
        _group('de branges axioms', check_debranges_axioms, 1e-10,
               'Blaschke norm invariance, star conjugation and the evaluation bound.'),
        _group('structure correspondence', check_structure_correspondence, 1e-8,
               'Zeros of s_t are extension spectra; a and b are real on the real line.'),
        _group('limit circle', check_limit_circle, config.limit_circle_tol,
               'Square summability diagnostic for steep and free recurrences.'),
    ]


def supplied_model_group(model: ModelContract) -> VerificationGroup:
    """
    Parseval and reproducing checks on a model given on the command line.
    """

    def check_supplied(rng: np.random.Generator, tol: float) -> GroupResult:
        measure = spectral_measure(model)
        worst = 0.0
        for _ in range(10):
            phi, eta = random_state(rng, model), random_state(rng, model)
            worst = max(worst,
                        abs(parseval_inner(model, phi, eta, measure) - phi.inner(eta)) / (phi.norm() * eta.norm()))
            w = float(rng.uniform(measure.atoms[0], measure.atoms[-1])) if len(measure.atoms) else 0.0
            worst = max(worst, reproducing_check(model, w, measure, phi) / cauchy_schwarz_scale(model, phi, w))
        return GroupResult(max_error=worst, detail=f'{model.basis_tag}, {len(measure.atoms)} atoms')

    return _group('supplied model', check_supplied, 1e-9,
                  'Parseval and reproducing identities on the model given with --model.')
