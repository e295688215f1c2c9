"""selftest and search commands."""

import argparse

from preserverlab.cli.io import CommandResult
from preserverlab.core.config import settings
from preserverlab.models.report import SelfTestReport
from preserverlab.schemas.report import SearchReportSchema, SelfTestReportSchema
from preserverlab.services.search_service import search_unitary_to_involution
from preserverlab.services.selftest_service import check_names, run_selftest

# Residual the nonexistence search must never go below
SEARCH_FLOOR = 0.1


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("selftest", parents=[common], help="seeded invariant suite")
    parser.add_argument("--full", action="store_true", help="use the acceptance sample counts")
    parser.add_argument(
        "--inject-fault", action="store_true", help="corrupt the Kronecker kernel (negative control)"
    )
    parser.add_argument(
        "--only",
        action="append",
        default=None,
        metavar="PREFIX",
        help=f"run checks whose name starts with PREFIX; known: {', '.join(check_names())}",
    )
    parser.set_defaults(handler=selftest_command, command_name="selftest")

    search = subparsers.add_parser("search", parents=[common], help="least-squares search for M_2 -> H_2 maps")
    search.add_argument("--restarts", type=int, default=None, help=f"restarts (default {settings.search_restarts})")
    search.add_argument(
        "--unitaries", type=int, default=None, help=f"sampled unitaries (default {settings.search_unitaries})"
    )
    search.set_defaults(handler=search_command, command_name="search")


def render(report: SelfTestReport) -> str:
    """One line per check, then the verdict."""
    lines = [f"selftest seed={report.seed} full={report.full} fault_injected={report.fault_injected}"]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        line = (
            f"{status}  {check.name:<36} worst={check.worst_residual:.3e} "
            f"threshold={check.threshold:.1e} cases={check.cases}"
        )
        if check.detail:
            line += f"  ({check.detail})"
        lines.append(line)
    lines.append("all checks passed" if report.passed else f"failed: {', '.join(report.failures)}")
    return "\n".join(lines)


def selftest_command(args: argparse.Namespace) -> CommandResult:
    report = run_selftest(seed=args.seed, full=args.full, inject_fault=args.inject_fault, only=args.only)
    return CommandResult(
        SelfTestReportSchema.from_domain(report),
        ok=report.passed,
        seed=report.seed,
        text=render(report),
    )


def search_command(args: argparse.Namespace) -> CommandResult:
    report = search_unitary_to_involution(restarts=args.restarts, unitaries=args.unitaries, seed=args.seed)
    return CommandResult(
        SearchReportSchema.from_domain(report),
        ok=report.best_residual >= SEARCH_FLOOR,
        seed=report.seed,
    )
