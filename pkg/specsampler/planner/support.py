from typing import Callable, Optional, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from specsampler.exception_classes import ContractViolationException


class DisplayMessages(BaseModel):
    """
    Represents display messages for a verification group.

    Attributes:
        success_message: The message to display when the group passes.
        failure_message: The message to display when the group fails.
        ongoing_message: The message to display while the group runs.
        description: A description of the property the group checks.
        failure_instructions: Note added to the report when the group fails.
    """
    success_message: Optional[str] = None
    failure_message: Optional[str] = None
    ongoing_message: Optional[str] = None
    description: Optional[str] = None
    failure_instructions: Optional[str] = None


class GroupResult(BaseModel):
    """
    What a group runner observed.

    Attributes:
        max_error: Largest error over all trials.
        conditions_hold: Outcome of the group's non-numeric assertions.
        detail: Short context for the report.
    """
    max_error: float
    conditions_hold: bool = True
    detail: str = ''


class VerificationGroup(BaseModel):
    """
    Represents one invariant group of the verification suite.

    Attributes:
        name: The name of the group.
        runner: Callable receiving the seeded generator and the tolerance.
        tolerance: Default tolerance of the group.
        display_messages: Display messages for the group.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    runner: Callable[[np.random.Generator, float], GroupResult]
    tolerance: float
    display_messages: DisplayMessages

    @model_validator(mode='after')
    def check_tolerance(self) -> Self:
        """
        Validates that the tolerance is positive.

        Raises:
            ContractViolationException: If the tolerance is not positive.

        Returns:
            The validated VerificationGroup instance.
        """
        if not self.tolerance > 0:
            raise ContractViolationException(f'Group "{self.name}" needs a positive tolerance')
        return self
