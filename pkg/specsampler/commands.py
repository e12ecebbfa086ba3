import logging
import math

import numpy as np

from specsampler import config
from specsampler.core.contract import ModelContract, extension_sweep
from specsampler.debranges.model import StructureFunction
from specsampler.debranges.structure import ab_split, st_eval
from specsampler.exception_classes import ContractViolationException, InputValidationException, \
    InternalAssertionException
from specsampler.jacobi.operator import JacobiModel, limit_circle_diagnostic, place_sampling_point, sampling_set
from specsampler.loaders import POINTS_HEADER, extension_from_options, load_model, load_points, load_state, \
    parse_complex, parse_grid
from specsampler.planner.planner import VerificationPlanner
from specsampler.reconstruct.engine import reconstruction_report
from specsampler.storage import RunConfig
from specsampler.verification.suite import build_suite, supplied_model_group
from specsampler.writers import emit, to_csv, to_json

logger = logging.getLogger('App.Commands')

PLACEMENT_TOLERANCE = 1e-8

RECONSTRUCT_HEADER = ['z_re', 'z_im', 'f_true_re', 'f_true_im', 'f_kernel_re', 'f_kernel_im',
                      'f_lagrange_re', 'f_lagrange_im', 'err_kernel', 'err_lagrange']

STRUCTURE_HEADER = ['z_re', 'z_im', 'e_re', 'e_im', 'a_re', 'a_im', 'b_re', 'b_im', 's_re', 's_im']


def _model(run: RunConfig) -> ModelContract:
    model = load_model(run.model).build(run)
    logger.info(f'Model {model.basis_tag}')
    return model


def _jacobi(run: RunConfig) -> JacobiModel:
    model = _model(run)
    if not isinstance(model, JacobiModel):
        raise ContractViolationException(f'Command "{run.command}" needs a Jacobi model, got "{run.model}"')
    return model


def cmd_points(run: RunConfig) -> int:
    model = _model(run)
    param = extension_from_options(model, run)
    points = model.extension_family(param)
    logger.info(f'{len(points)} sampling points for {param.label()}')
    rows = [(i, x, norm, weight) for i, (x, norm, weight) in
            enumerate(zip(points.points, points.kernel_norms, points.weights))]
    emit(to_csv(POINTS_HEADER, rows), run.out, 'Sampling points', param.label())
    return 0


def cmd_reconstruct(run: RunConfig) -> int:
    """
    Compares both sampling series with the transform of a state on a grid.

    The sampling set comes from ``--points`` when given, else from the selected extension.
    """
    model = _model(run)
    phi = load_state(run.state, model)
    grid = parse_grid(run.grid)
    if run.points:
        points = load_points(run.points)
    else:
        points = model.extension_family(extension_from_options(model, run))
    schedule = [run.terms] if run.terms is not None else None

    report = reconstruction_report(model, phi, list(grid), schedule=schedule, sampling_set=points,
                                   anchor_index=run.anchor)
    rows = [
        (row.z.real, row.z.imag, row.f_true.real, row.f_true.imag, row.f_kernel.real, row.f_kernel.imag,
         row.f_lagrange.real, row.f_lagrange.imag, row.err_kernel, row.err_lagrange)
        for row in report.rows
    ]
    kernel_error, lagrange_error = report.max_errors()
    emit(to_csv(RECONSTRUCT_HEADER, rows), run.out, 'Reconstruction',
         f'max errors {kernel_error:.3e} (kernel), {lagrange_error:.3e} (Lagrange)')
    return 0


def cmd_place(run: RunConfig) -> int:
    """
    Finds the boundary angle whose spectrum contains ``--x-star`` and checks the containment.

    Raises:
        InternalAssertionException: If the spectrum misses the point.
    """
    model = _jacobi(run)
    angle = place_sampling_point(model.coefficients, model.n, run.x_star)
    points = sampling_set(model.coefficients, model.n, angle).points
    distance = float(np.min(np.abs(points - run.x_star))) if len(points) else math.inf
    if distance > PLACEMENT_TOLERANCE * max(1.0, abs(run.x_star)):
        raise InternalAssertionException(f'Spectrum of {angle.label()} misses {run.x_star} by {distance:.3e}')

    logger.info(f'Placed {run.x_star} with {angle.label()}')
    emit(to_json({'tau': angle.tau, 'points': points.tolist()}), run.out, 'Placement', angle.label())
    return 0


def cmd_verify(run: RunConfig) -> int:
    groups = build_suite()
    if run.model:
        groups.insert(0, supplied_model_group(_model(run)))

    tolerance = run.tol
    if tolerance is None and config.tolerance_override:
        tolerance = float(config.tolerance_override)

    planner = VerificationPlanner(groups, seed=run.seed, tolerance_override=tolerance)
    passed = planner.execute()
    planner.print_summary()
    return 0 if passed else 1


def cmd_sweep(run: RunConfig) -> int:
    model = _model(run)
    params = model.extension_parameters(run.count)
    rows = []
    for param, points in zip(params, extension_sweep(model, params)):
        rows.extend((param.label(), i, x, norm, weight) for i, (x, norm, weight) in
                    enumerate(zip(points.points, points.kernel_norms, points.weights)))
    emit(to_csv(['extension'] + POINTS_HEADER, rows), run.out, 'Extension sweep', f'{run.count} extensions')
    return 0


def cmd_diagnose(run: RunConfig) -> int:
    model = _jacobi(run)
    z = parse_complex(run.z) if run.z else 1j
    tolerance = run.tol if run.tol is not None else config.limit_circle_tol
    report = limit_circle_diagnostic(model.coefficients, z, run.kmax, tolerance)
    logger.info(f'Limit-circle diagnostic at {z}: converged={report.converged}')
    emit(to_json(report.model_dump(mode='json')), run.out, 'Limit-circle diagnostic', f'z={z}')
    return 0


def cmd_structure(run: RunConfig) -> int:
    """
    Tabulates the structure function, its real and imaginary parts, and ``s_t`` on a grid.

    Raises:
        InvalidAnchorException: If ``--z`` is real.
    """
    model = _model(run)
    w0 = parse_complex(run.z) if run.z else 1j
    sf = StructureFunction(model=model, w0=w0)
    rows = []
    for z in parse_grid(run.grid):
        pair = ab_split(sf, z)
        s = st_eval(sf, run.t, z)
        rows.append((z.real, z.imag, pair.e_val.real, pair.e_val.imag, pair.a_val.real, pair.a_val.imag,
                     pair.b_val.real, pair.b_val.imag, s.real, s.imag))
    emit(to_csv(STRUCTURE_HEADER, rows), run.out, 'Structure function', f'w0={w0}, t={run.t}')
    return 0


handlers = {
    'points': cmd_points,
    'reconstruct': cmd_reconstruct,
    'place': cmd_place,
    'verify': cmd_verify,
    'sweep': cmd_sweep,
    'diagnose': cmd_diagnose,
    'structure': cmd_structure,
}


def dispatch(run: RunConfig) -> int:
    if run.command not in handlers:
        raise InputValidationException(f'Unknown command "{run.command}"')
    logger.info(f'Running command "{run.command}"')
    return handlers[run.command](run)
