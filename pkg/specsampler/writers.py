import csv
import io
import json
import logging
import sys
from typing import Any, Iterable, Optional, Sequence

from specsampler import config

logger = logging.getLogger('App.Writers')


def format_number(value: float) -> str:
    """
    17 significant digits, enough to read every double back unchanged.
    """
    return format(float(value), '.17g')


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([value if isinstance(value, (str, int)) else format_number(value) for value in row])
    return buffer.getvalue()


def to_json(document: Any) -> str:
    return json.dumps(document, indent=2) + '\n'


def emit(content: str, out: Optional[str], name: str, details: str = '-'):
    """
    Writes a result to ``out`` and records it, or prints it to standard output.

    Args:
        content: Rendered CSV or JSON text.
        out: Destination path, standard output when omitted.
        name: Resource name for the run report.
        details: Short description for the run report.
    """
    if out:
        logger.info(f'Writing {name} to {out}')
        config.chores.write_output(out, content, name, details)
    else:
        sys.stdout.write(content)
        sys.stdout.flush()
