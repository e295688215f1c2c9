"""Command-line entry point."""

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from preserverlab.cli.io import emit
from preserverlab.cli.router import build_parser
from preserverlab.core.config import settings
from preserverlab.core.exceptions import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERDICT, PreserverLabError
from preserverlab.schemas.common import ErrorResponse

logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> None:
    """Send log lines to stderr so stdout carries only result documents."""
    logging.basicConfig(
        level=getattr(logging, level or settings.log_level),
        format=settings.log_format,
        stream=sys.stderr,
        force=True,
    )


def _error(exc: PreserverLabError) -> int:
    """Handle library exceptions."""
    sys.stderr.write(f"preserverlab: {exc.error_code}: {exc.message}\n")
    body = ErrorResponse(error_code=exc.error_code, message=exc.message, details=exc.details)
    sys.stdout.write(body.model_dump_json() + "\n")
    return exc.exit_code


def _validation_error(exc: ValidationError) -> int:
    """Handle schema validation failures of input documents."""
    errors = [
        {"field": ".".join(str(loc) for loc in error["loc"]), "message": error["msg"]}
        for error in exc.errors()
    ]
    sys.stderr.write(f"preserverlab: INVALID_INPUT: {len(errors)} validation error(s)\n")
    body = ErrorResponse(
        error_code="INVALID_INPUT",
        message="Input document validation failed",
        details={"errors": errors},
    )
    sys.stdout.write(body.model_dump_json() + "\n")
    return EXIT_INPUT_ERROR


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv``, run the command and write its result envelope.

    Returns:
        0 on success, 2 on a negative verdict (not a preserver, empty set,
        false membership, failed self-test), 1 on input or numerical errors
    """
    parser = build_parser()
    try:
        args: argparse.Namespace = parser.parse_args(argv)
    except PreserverLabError as exc:
        return _error(exc)
    except SystemExit as exc:  # --help, --version
        return int(exc.code or 0)

    configure_logging(args.log_level)
    logger.debug(f"{args.command_name}: {vars(args)}")
    try:
        outcome = args.handler(args)
        emit(args.command_name, outcome, args)
    except PreserverLabError as exc:
        return _error(exc)
    except ValidationError as exc:
        return _validation_error(exc)
    except Exception as exc:
        logger.exception("Unexpected error occurred")
        body = ErrorResponse(
            error_code="INTERNAL_ERROR",
            message="An unexpected error occurred",
            details={"error": str(exc)},
        )
        sys.stdout.write(body.model_dump_json() + "\n")
        return EXIT_INPUT_ERROR
    return EXIT_OK if outcome.ok else EXIT_VERDICT


def main() -> None:
    sys.exit(run())
