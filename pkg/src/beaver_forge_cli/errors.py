"""Exit-code mapping for SDK exceptions.

Rather than catching errors in every subcommand, ``app.main`` funnels them
through :func:`exit_code_for`.  Classes are checked in order; first match
wins.  The full message goes to the log; stdout gets a small JSON report.

    0  success
    3  parameter error (bad config, bad params, noise budget exceeded)
    4  protocol abort (malformed message, missing share, depleted pool, ...)
    5  I/O error
    1  anything else
"""

from __future__ import annotations

import logging

import yaml
from pydantic import ValidationError

from beaver_forge.errors import ParameterError, ProtocolAbortError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARAMETER = 3
EXIT_PROTOCOL = 4
EXIT_IO = 5

# --- Exception classes and their exit codes ---
# Checked in order; first match wins.
_EXIT_CODES: list[tuple[type[BaseException], int]] = [
    (ParameterError, EXIT_PARAMETER),
    # Config values pydantic could not coerce
    (ValidationError, EXIT_PARAMETER),
    (yaml.YAMLError, EXIT_PARAMETER),
    (ProtocolAbortError, EXIT_PROTOCOL),
    (OSError, EXIT_IO),
]


def exit_code_for(exc: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return EXIT_UNEXPECTED


def error_report(exc: BaseException) -> dict:
    """JSON body for a failed command."""
    code = exit_code_for(exc)
    if code == EXIT_UNEXPECTED:
        logger.exception("unexpected failure")
    else:
        logger.error("%s: %s", type(exc).__name__, exc)
    return {"error": type(exc).__name__, "detail": str(exc), "exit_code": code}
