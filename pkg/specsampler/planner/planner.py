import logging
import time
import traceback
from typing import Optional

import numpy as np
from rich.console import Console

from specsampler import config
from specsampler.exception_classes import VerificationFailedException
from specsampler.planner.display import RichDisplay
from specsampler.planner.support import GroupResult, VerificationGroup
from specsampler.storage import CheckOutcome, ReportNote

logger = logging.getLogger('App.Planner')


class VerificationPlanner:
    """
    Runs a list of invariant groups in order and records their outcomes.

    Every group draws from one generator seeded once, so a run is reproducible for a given seed
    and group order.

    Attributes:
        groups: The groups to run.
        seed: Seed of the shared generator.
        tolerance_override: Replaces every group's own tolerance when set.
        strict: Raise on the first failing group instead of continuing.
        _display: An instance of the RichDisplay class for displaying progress.
        progress_id: The ID of the progress bar in the display.
    """

    def __init__(self, groups: list[VerificationGroup], seed: int, tolerance_override: Optional[float] = None,
                 strict: bool = False):
        self.groups: list[VerificationGroup] = groups
        self.seed: int = seed
        self.tolerance_override: Optional[float] = tolerance_override
        self.strict: bool = strict
        self._display: RichDisplay = RichDisplay('SpecSampler verification')
        self.progress_id: int = 0
        self.outcomes: list[CheckOutcome] = []

    def __tolerance(self, group: VerificationGroup) -> float:
        return self.tolerance_override if self.tolerance_override is not None else group.tolerance

    def __run_group(self, group: VerificationGroup, rng: np.random.Generator) -> CheckOutcome:
        """
        Runs one group and turns its result into an outcome.

        A runner that raises is recorded as a failed group carrying the exception text.

        Args:
            group: The group to run.
            rng: The shared generator.

        Returns:
            The recorded outcome.
        """
        tolerance = self.__tolerance(group)
        logger.info(f'Running group "{group.name}" with tolerance {tolerance:.1e}')
        self._display.add_item_to_logs(group.display_messages.ongoing_message or group.name, item_type='loading')
        if group.display_messages.description:
            self._display.set_details_message(group.display_messages.description)

        started = time.perf_counter()
        try:
            result: GroupResult = group.runner(rng, tolerance)
            passed = result.conditions_hold and result.max_error <= tolerance
            outcome = CheckOutcome(name=group.name, passed=passed, max_error=result.max_error,
                                   tolerance=tolerance, detail=result.detail)
        except Exception as e:
            logger.error(traceback.format_exc())
            outcome = CheckOutcome(name=group.name, passed=False, max_error=float('inf'), tolerance=tolerance,
                                   detail=f'{type(e).__name__}: {e}')
        outcome.elapsed = time.perf_counter() - started

        logger.debug(f'Outcome {outcome.model_dump()}')
        self._display.advance_progress_bar(self.progress_id, 1)
        return outcome

    def __on_group_success(self, group: VerificationGroup, outcome: CheckOutcome):
        logger.info(f'Group "{group.name}" passed, max error {outcome.max_error:.3e}')
        self._display.add_item_to_logs(group.display_messages.success_message or f'{group.name} passed',
                                       item_type='success')

    def __on_group_failure(self, group: VerificationGroup, outcome: CheckOutcome):
        """
        Handles the failure of a group.

        Args:
            group: The group that failed.
            outcome: Its recorded outcome.

        Raises:
            VerificationFailedException: If the planner is strict.
        """
        logger.warning(f'Group "{group.name}" failed: max error {outcome.max_error:.3e} > {outcome.tolerance:.1e}'
                       f' {outcome.detail}')
        self._display.add_item_to_logs(group.display_messages.failure_message or f'{group.name} failed',
                                       item_type='error')

        if group.display_messages.failure_instructions:
            config.storage.notes.append(
                ReportNote(
                    title=group.name,
                    message=group.display_messages.failure_instructions
                )
            )

        if self.strict:
            self._display.stop()
            raise VerificationFailedException(f'Group "{group.name}" failed\n\n{outcome.detail}')

    def execute(self) -> bool:
        """
        Runs every group and shows the summary table.

        Returns:
            True when every group passed.

        Raises:
            VerificationFailedException: If a group fails and the planner is strict.
        """
        rng = np.random.default_rng(self.seed)
        self.progress_id = self._display.add_progress_bar('Groups', len(self.groups))
        logger.info(f'Running {len(self.groups)} groups with seed {self.seed}')
        self._display.start()

        for group in self.groups:
            outcome = self.__run_group(group, rng)
            self.outcomes.append(outcome)
            config.storage.outcomes.append(outcome)
            if outcome.passed:
                self.__on_group_success(group, outcome)
            else:
                self.__on_group_failure(group, outcome)

        self._display.stop()
        return all(outcome.passed for outcome in self.outcomes)

    def print_summary(self, console: Optional[Console] = None):
        console = console or Console()
        console.print(RichDisplay.summary_table('Verification', self.outcomes))
        passed = sum(outcome.passed for outcome in self.outcomes)
        console.print(f'{passed} of {len(self.outcomes)} groups passed')
