from typing import Literal, Optional, Self

from pydantic import BaseModel, Field, model_validator

from specsampler.exception_classes import InputValidationException


Command = Literal['points', 'reconstruct', 'place', 'verify', 'sweep', 'diagnose', 'structure']


class Resource(BaseModel):
    name: str
    path: str
    type: str
    details: Optional[str] = '-'
    reference: Optional[str] = '-'

    @staticmethod
    def get_table_header():
        header = '| Name | Type | Path | Details | References |\n'
        header += '| --- | --- | --- | --- | --- |\n'
        return header

    def get_row_markdown(self):
        return f'| {self.name} | {self.type} | {self.path} | {self.details} | {self.reference} |\n'


class CheckOutcome(BaseModel):
    """
    Result of one invariant group of the verification suite.

    Attributes:
        name: Name of the invariant group.
        passed: Whether every assertion of the group held.
        max_error: Largest observed error, in the units of the group's tolerance.
        tolerance: Tolerance the group was checked against.
        detail: Free-form context, e.g. trial counts or the failing instance.
        elapsed: Wall time in seconds.
    """
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ''
    elapsed: float = 0.0

    @staticmethod
    def get_table_header():
        header = '| Group | Result | Max error | Tolerance | Detail |\n'
        header += '| --- | --- | --- | --- | --- |\n'
        return header

    def get_row_markdown(self):
        result = 'pass' if self.passed else 'FAIL'
        return f'| {self.name} | {result} | {self.max_error:.3e} | {self.tolerance:.1e} | {self.detail} |\n'


class ReportNote(BaseModel):
    title: Optional[str] = None
    message: str

    def get_markdown(self):
        if self.title:
            return f'## {self.title} \n{self.message}\n\n'
        else:
            return f'{self.message}\n\n'


class RunConfig(BaseModel):
    """
    Parsed command line of one invocation.

    The model variant itself is resolved from ``model`` when the file is loaded, since a
    path or shipped name only tells which variant it is after parsing.
    """
    command: Command
    model: Optional[str] = None
    state: Optional[str] = None
    points: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=1)
    tau: Optional[float] = None
    theta: Optional[float] = None
    window: Optional[int] = Field(default=None, ge=0)
    terms: Optional[int] = Field(default=None, ge=0)
    grid: Optional[str] = None
    seed: int = 42
    out: Optional[str] = None
    tol: Optional[float] = None
    x_star: Optional[float] = None
    anchor: Optional[int] = Field(default=None, ge=0)
    count: int = Field(default=8, ge=1)
    t: float = 0.0
    z: Optional[str] = None
    kmax: int = Field(default=200, ge=8)

    @model_validator(mode='after')
    def check_options(self) -> Self:
        """
        Validates option combinations that argparse cannot express.

        Raises:
            InputValidationException: If both an angle and a phase are given, a grid is missing for an
                evaluation command, or a command misses its mandatory input.

        Returns:
            The validated RunConfig instance.
        """
        if self.tau is not None and self.theta is not None:
            raise InputValidationException('Options "--tau" and "--theta" are mutually exclusive')
        if self.command in ('reconstruct', 'structure') and not self.grid:
            raise InputValidationException(f'Command "{self.command}" requires a non-empty "--grid"')
        if self.command == 'reconstruct' and not self.state:
            raise InputValidationException('Command "reconstruct" requires "--state"')
        if self.command == 'place' and self.x_star is None:
            raise InputValidationException('Command "place" requires "--x-star"')
        if self.command in ('points', 'reconstruct', 'place', 'sweep', 'diagnose', 'structure') and not self.model:
            raise InputValidationException(f'Command "{self.command}" requires "--model"')
        if self.tol is not None and self.tol <= 0:
            raise InputValidationException('Option "--tol" must be positive')
        return self


class RuntimeData(BaseModel):
    inputs: Optional[RunConfig] = None
    outcomes: list[CheckOutcome] = Field(default_factory=list, description='Outcomes of verification groups')
    resources: list[Resource] = Field(default_factory=list, description='Generated output files')
    notes: list[ReportNote] = Field(default_factory=list,
                                    description='Messages to be printed at the end of the process')
