from __future__ import annotations

import logging
import sys
import traceback
from typing import Optional, Sequence

from pydantic import ValidationError

from specsampler import config
from specsampler.commands import dispatch
from specsampler.exception_classes import ContractViolationException, InputValidationException, \
    InvalidAnchorException, VerificationFailedException
from specsampler.navigation import ArgumentMenus

logger = logging.getLogger('App.Main')
logging.getLogger('App.RichDisplay').setLevel(logging.ERROR)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

INPUT_ERRORS = (InputValidationException, ContractViolationException, InvalidAnchorException, ValidationError)


def diagnostic(e: Exception) -> str:
    """
    One-line description of an error for the error stream.
    """
    if isinstance(e, ValidationError):
        error = e.errors()[0]
        location = '.'.join(str(part) for part in error['loc'])
        message = f'{location}: {error["msg"]}' if location else error['msg']
    else:
        message = str(e)
    lines = message.strip().splitlines()
    return f'{type(e).__name__}: {lines[0] if lines else ""}'


def main(argv: Optional[Sequence[str]] = None) -> int:
    logger.info('Starting App')
    try:
        run = ArgumentMenus.parse(argv)
        config.storage.inputs = run
        code = dispatch(run)
        config.chores.cleanup()
        return code
    except SystemExit as e:
        # argparse usage errors and --help
        return EXIT_INPUT_ERROR if e.code else EXIT_OK
    except Exception as e:
        # the error stream gets the one-line diagnostic, the log file the traceback
        logger.debug(traceback.format_exc())
        config.chores.should_generate_report = False
        config.chores.cleanup()
        print(diagnostic(e), file=sys.stderr)
        if isinstance(e, INPUT_ERRORS):
            return EXIT_INPUT_ERROR
        if isinstance(e, VerificationFailedException):
            return EXIT_VERIFICATION_FAILED
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
