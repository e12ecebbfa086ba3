from unittest.mock import patch

import numpy as np
import pytest

from specsampler.exception_classes import ContractViolationException, VerificationFailedException
from specsampler.planner.planner import VerificationPlanner
from specsampler.planner.support import DisplayMessages, GroupResult, VerificationGroup
from specsampler.tridiag.model import TridiagMatrix
from specsampler.verification.suite import build_suite, characteristic_roots, check_pw_lattice

# Sample data for testing
sample_display_messages = DisplayMessages(
    success_message="Success",
    failure_message="Failure",
    ongoing_message="Ongoing",
    description="This is a test group",
    failure_instructions="Follow these instructions on failure"
)


def passing_runner(rng, tol):
    return GroupResult(max_error=tol / 10, detail='ok')


def failing_runner(rng, tol):
    return GroupResult(max_error=tol * 10, detail='too large')


def broken_condition_runner(rng, tol):
    return GroupResult(max_error=0.0, conditions_hold=False, detail='ordering violated')


def raising_runner(rng, tol):
    raise ZeroDivisionError('boom')


def drawing_runner(rng, tol):
    return GroupResult(max_error=0.0, detail=repr(rng.uniform()))


def group(name, runner, tolerance=1e-10):
    return VerificationGroup(name=name, runner=runner, tolerance=tolerance, display_messages=sample_display_messages)


# Mock classes
class MockRichDisplay:
    def __init__(self, *args, **kwargs):
        pass

    def add_item_to_logs(self, *args, **kwargs):
        pass

    def advance_progress_bar(self, *args, **kwargs):
        pass

    def set_details_message(self, *args, **kwargs):
        pass

    def start(self):
        pass

    def stop(self):
        pass

    def add_progress_bar(self, *args, **kwargs):
        return 1

    @staticmethod
    def summary_table(*args, **kwargs):
        return 'summary'


# Test VerificationGroup validation
def test_group_rejects_bad_tolerance():
    with pytest.raises(ContractViolationException):
        group('bad', passing_runner, tolerance=0.0)


# Test __init__ method
@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_init(MockRichDisplayClass):
    planner = VerificationPlanner([group('a', passing_runner)], seed=42)
    assert isinstance(planner._display, MockRichDisplay)
    assert planner.seed == 42
    assert planner.tolerance_override is None
    assert not planner.strict
    assert planner.outcomes == []


# Test execute method
@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_execute_all_pass(MockRichDisplayClass):
    planner = VerificationPlanner([group('a', passing_runner), group('b', passing_runner)], seed=1)
    assert planner.execute()
    assert [outcome.name for outcome in planner.outcomes] == ['a', 'b']
    assert all(outcome.passed for outcome in planner.outcomes)
    assert planner.outcomes[0].max_error == pytest.approx(1e-11)


@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_execute_records_failures_and_continues(MockRichDisplayClass):
    groups = [group('fails', failing_runner), group('broken', broken_condition_runner),
              group('raises', raising_runner), group('passes', passing_runner)]
    planner = VerificationPlanner(groups, seed=1)
    assert not planner.execute()
    assert [outcome.passed for outcome in planner.outcomes] == [False, False, False, True]
    assert planner.outcomes[2].max_error == float('inf')
    assert 'ZeroDivisionError' in planner.outcomes[2].detail


@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_execute_strict(MockRichDisplayClass):
    planner = VerificationPlanner([group('fails', failing_runner), group('passes', passing_runner)], seed=1,
                                  strict=True)
    with pytest.raises(VerificationFailedException):
        planner.execute()
    assert len(planner.outcomes) == 1


@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_execute_tolerance_override(MockRichDisplayClass):
    planner = VerificationPlanner([group('a', passing_runner, tolerance=1e-3)], seed=1, tolerance_override=1e-6)
    assert planner.execute()
    assert planner.outcomes[0].tolerance == 1e-6
    assert planner.outcomes[0].max_error == pytest.approx(1e-7)


@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_execute_is_reproducible(MockRichDisplayClass):
    def details(seed):
        planner = VerificationPlanner([group('a', drawing_runner), group('b', drawing_runner)], seed=seed)
        planner.execute()
        return [outcome.detail for outcome in planner.outcomes]

    assert details(42) == details(42)
    assert details(42) != details(43)
    assert details(42)[0] != details(42)[1]


# Test print_summary method
@patch('specsampler.planner.planner.RichDisplay', new_callable=lambda: MockRichDisplay)
def test_print_summary(MockRichDisplayClass, capsys):
    planner = VerificationPlanner([group('a', passing_runner), group('b', failing_runner)], seed=1)
    planner.execute()
    planner.print_summary()
    assert '1 of 2 groups passed' in capsys.readouterr().out


# Test the suite definition
def test_build_suite():
    groups = build_suite()
    assert len(groups) == 14
    assert len({g.name for g in groups}) == 14
    assert all(g.tolerance > 0 for g in groups)


def test_characteristic_roots():
    rng = np.random.default_rng(5)
    m = TridiagMatrix(diag=rng.uniform(-0.5, 0.5, 5), offdiag=rng.uniform(0.5, 1.5, 4))
    dense = np.diag(m.diag) + np.diag(m.offdiag, 1) + np.diag(m.offdiag, -1)
    np.testing.assert_allclose(characteristic_roots(m), np.linalg.eigvalsh(dense), atol=1e-9)


@pytest.mark.parametrize('seed', [0, 7, 42, 1234])
def test_pw_lattice_is_scale_free(seed):
    # evaluation points reach |Im z| = 3, where transform values are near 1e8
    result = check_pw_lattice(np.random.default_rng(seed), 1e-12)
    assert result.max_error < 1e-12
