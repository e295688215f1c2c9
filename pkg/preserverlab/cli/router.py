"""Argument parser assembled from the command modules."""

import argparse

from preserverlab.cli.commands import basis, blend, classify, construct, geometry, selftest, verify
from preserverlab.core.config import settings
from preserverlab.core.exceptions import InvalidInput
from preserverlab.models.enums import OutputFormat


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors are input errors (exit 1), not exit 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InvalidInput(f"{self.prog}: {message}")


def common_options() -> ArgumentParser:
    """Options shared by every leaf command."""
    parent = ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=None, help=f"random seed (default {settings.default_seed})")
    parent.add_argument("--tol", type=float, default=None, help="override the command's tolerance")
    parent.add_argument("--samples", type=int, default=None, help="randomized sample count")
    parent.add_argument("--output", "-o", default=None, help="write the result here instead of stdout")
    parent.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
        help="json (one line) or pretty",
    )
    parent.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help=f"stderr log level (default {settings.log_level})",
    )
    return parent


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="preserverlab",
        description="Rank-k projection preservers: geometry, example maps and classification.",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    common = common_options()

    # Two-subspace geometry
    geometry.register(subparsers, common)
    blend.register(subparsers, common)

    # Example maps and their checks
    construct.register(subparsers, common)
    verify.register(subparsers, common)
    basis.register(subparsers, common)

    # Classification
    classify.register(subparsers, common)

    # Suites
    selftest.register(subparsers, common)
    return parser
