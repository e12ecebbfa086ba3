import csv
import json
import logging
import math
import os
from typing import Optional, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from rich.pretty import pretty_repr

from specsampler import config
from specsampler.core.contract import ModelContract
from specsampler.core.model import SamplingSet, StateVector
from specsampler.exception_classes import ContractViolationException, InputValidationException
from specsampler.jacobi.model import BoundaryAngle, JacobiCoefficients
from specsampler.jacobi.operator import JacobiModel
from specsampler.paley_wiener.model import PWConfig, PhaseParameter
from specsampler.paley_wiener.operator import PaleyWienerModel
from specsampler.storage import RunConfig

logger = logging.getLogger('App.Loaders')

POINTS_HEADER = ['index', 'x', 'kernel_norm', 'weight']


class JacobiSource(BaseModel):
    coefficients: JacobiCoefficients
    n: Optional[int] = Field(default=None, ge=1)


class ModelSource(BaseModel):
    """
    A model description read from a file or the shipped catalogue.

    Attributes:
        name: Shipped name or file path.
        jacobi: Jacobi variant.
        pw: Interval variant.
    """
    model_config = ConfigDict(frozen=True)

    name: str
    jacobi: Optional[JacobiSource] = None
    pw: Optional[PWConfig] = None

    @model_validator(mode='after')
    def check_variant(self) -> Self:
        if (self.jacobi is None) == (self.pw is None):
            raise InputValidationException(f'Model "{self.name}" must hold exactly one of "jacobi" and "pw"')
        return self

    def build(self, run: RunConfig) -> ModelContract:
        """
        Instantiates the model with the size and window options of a run.

        Raises:
            InputValidationException: If a Jacobi model has no truncation size.
        """
        if self.jacobi is not None:
            n = run.n or self.jacobi.n or len(self.jacobi.coefficients.b)
            if not n:
                raise InputValidationException(f'Model "{self.name}" needs a truncation size, pass "--n"')
            return JacobiModel(self.jacobi.coefficients, n)
        window = run.window if run.window is not None else self.pw.basis_cutoff
        return PaleyWienerModel(self.pw, window)


def _jacobi_source(entry: dict) -> JacobiSource:
    entry = dict(entry)
    n = entry.pop('N', None)
    return JacobiSource(coefficients=JacobiCoefficients.model_validate(entry), n=n)


def _read_json(path: str, kind: str) -> dict:
    try:
        with open(path, 'r') as f:
            document = json.load(f)
    except OSError as e:
        raise InputValidationException(f'Cannot read {kind} file "{path}": {e.strerror}')
    except json.JSONDecodeError as e:
        raise InputValidationException(f'{kind.capitalize()} file "{path}" is not valid JSON: {e.msg}')
    if not isinstance(document, dict):
        raise InputValidationException(f'{kind.capitalize()} file "{path}" must hold a JSON object')
    return document


def load_model(reference: str) -> ModelSource:
    """
    Resolves a shipped model name or reads a model file.

    A file either wraps its variant in a ``jacobi`` or ``pw`` key, or holds the bare fields
    of one variant: ``b``, ``q``, ``rule`` and optionally ``N`` for Jacobi, ``a``,
    ``basis_cutoff`` and optionally ``reference_phase`` for the interval model.

    Raises:
        InputValidationException: If the reference is unknown or the file is malformed.
        pydantic.ValidationError: If coefficients violate their constraints.
    """
    if reference in config.shipped_models['jacobi']:
        logger.info(f'Using shipped Jacobi model "{reference}"')
        return ModelSource(name=reference, jacobi=_jacobi_source(config.shipped_models['jacobi'][reference]))
    if reference in config.shipped_models['pw']:
        logger.info(f'Using shipped interval model "{reference}"')
        return ModelSource(name=reference, pw=PWConfig.model_validate(config.shipped_models['pw'][reference]))
    if not os.path.exists(reference):
        shipped = sorted(config.shipped_models['jacobi']) + sorted(config.shipped_models['pw'])
        raise InputValidationException(f'Unknown model "{reference}", expected a file or one of {shipped}')

    document = _read_json(reference, 'model')
    logger.debug(f'Model file {reference}: {pretty_repr(document)}')
    if 'jacobi' in document or 'pw' in document:
        if set(document) - {'jacobi', 'pw'}:
            raise InputValidationException(f'Model file "{reference}" mixes a variant key with other fields')
        return ModelSource(
            name=reference,
            jacobi=_jacobi_source(document['jacobi']) if 'jacobi' in document else None,
            pw=PWConfig.model_validate(document['pw']) if 'pw' in document else None
        )
    is_pw = 'a' in document
    is_jacobi = bool({'b', 'q', 'rule'} & set(document))
    return ModelSource(
        name=reference,
        jacobi=_jacobi_source(document) if is_jacobi else None,
        pw=PWConfig.model_validate(document) if is_pw else None
    )


def _complex_entry(value) -> complex:
    if isinstance(value, dict):
        return complex(float(value.get('re', 0.0)), float(value.get('im', 0.0)))
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(float(value))


def load_state(path: str, model: ModelContract) -> StateVector:
    """
    Reads a state file for the given model.

    Jacobi states are ``{"coeffs": [...]}`` with real numbers, ``[re, im]`` pairs or
    ``{"re", "im"}`` objects. Interval states are ``{"a": ..., "modes": [{"k", "re", "im"}]}``.

    Raises:
        InputValidationException: If the file is malformed.
        ContractViolationException: If the state does not belong to the model's basis.
    """
    document = _read_json(path, 'state')
    try:
        if isinstance(model, PaleyWienerModel):
            cfg = model.cfg
            if 'a' not in document or 'modes' not in document:
                raise InputValidationException(f'State file "{path}" needs "a" and "modes"')
            if not math.isclose(float(document['a']), cfg.a, rel_tol=1e-12):
                raise ContractViolationException(f'State interval length {document["a"]} differs from model a={cfg.a}')
            coeffs = np.zeros(cfg.dimension, dtype=complex)
            for mode in document['modes']:
                k = int(mode['k'])
                if abs(k) > cfg.basis_cutoff:
                    raise ContractViolationException(f'Mode {k} lies beyond the basis cutoff {cfg.basis_cutoff}')
                coeffs[k + cfg.basis_cutoff] += complex(float(mode.get('re', 0.0)), float(mode.get('im', 0.0)))
        else:
            if 'coeffs' not in document:
                raise InputValidationException(f'State file "{path}" needs "coeffs"')
            coeffs = np.array([_complex_entry(value) for value in document['coeffs']], dtype=complex)
            if len(coeffs) != model.dimension:
                raise ContractViolationException(
                    f'State has {len(coeffs)} coefficients, model "{model.basis_tag}" has dimension {model.dimension}')
    except (KeyError, TypeError, ValueError) as e:
        raise InputValidationException(f'Malformed state file "{path}": {e}')

    logger.info(f'Loaded state with {len(coeffs)} coefficients from {path}')
    return StateVector(coeffs=coeffs, basis_tag=model.basis_tag)


def load_points(path: str) -> SamplingSet:
    """
    Reads a CSV written by the points command back into a sampling set.

    Raises:
        InputValidationException: If the header or a value is malformed.
    """
    try:
        with open(path, 'r', newline='') as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or not set(POINTS_HEADER) <= set(reader.fieldnames):
                raise InputValidationException(f'Points file "{path}" needs the columns {POINTS_HEADER}')
            rows = sorted(reader, key=lambda row: int(row['index']))
            points = np.array([float(row['x']) for row in rows])
            kernel_norms = np.array([float(row['kernel_norm']) for row in rows])
            weights = np.array([float(row['weight']) for row in rows])
    except OSError as e:
        raise InputValidationException(f'Cannot read points file "{path}": {e.strerror}')
    except ValueError as e:
        raise InputValidationException(f'Malformed points file "{path}": {e}')

    logger.info(f'Loaded {len(points)} sampling points from {path}')
    return SamplingSet(points=points, kernel_norms=kernel_norms, weights=weights)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(' ', '').replace('i', 'j'))
    except ValueError:
        raise InputValidationException(f'Cannot read "{text}" as a complex number')


def parse_grid(spec: str) -> np.ndarray:
    """
    Parses ``lo:hi:n[,imag]`` into ``n`` equally spaced points shifted by ``i * imag``.

    Raises:
        InputValidationException: If the grid string is malformed or empty.
    """
    body, _, imag = spec.partition(',')
    parts = body.split(':')
    try:
        if len(parts) != 3:
            raise ValueError('expected lo:hi:n')
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        shift = float(imag) if imag else 0.0
    except ValueError as e:
        raise InputValidationException(f'Malformed grid "{spec}": {e}')
    if count < 1:
        raise InputValidationException(f'Grid "{spec}" is empty')
    if not all(math.isfinite(value) for value in (lo, hi, shift)):
        raise InputValidationException(f'Grid "{spec}" has non-finite bounds')
    return np.linspace(lo, hi, count) + 1j * shift


def extension_from_options(model: ModelContract, run: RunConfig):
    """
    The extension selected by ``--tau`` or ``--theta``, the model's reference extension otherwise.

    Raises:
        InputValidationException: If the option does not fit the model.
    """
    if run.tau is not None:
        if not isinstance(model, JacobiModel):
            raise InputValidationException('Option "--tau" applies to Jacobi models, use "--theta"')
        return BoundaryAngle(tau=run.tau)
    if run.theta is not None:
        if not isinstance(model, PaleyWienerModel):
            raise InputValidationException('Option "--theta" applies to interval models, use "--tau"')
        return PhaseParameter(theta=run.theta)
    return model.default_extension()
