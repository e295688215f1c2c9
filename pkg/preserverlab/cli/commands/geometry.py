"""angles, gap and canon commands."""

import argparse

from preserverlab.cli.io import CommandResult, load_subspace
from preserverlab.schemas.geometry import TwoProjectionFormSchema
from preserverlab.services.grassmann_service import gap, principal_angles, two_projection_form


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    angles_parser = subparsers.add_parser("angles", parents=[common], help="principal angles between X and Y")
    pair_arguments(angles_parser)
    angles_parser.set_defaults(handler=angles_command, command_name="angles")

    gap_parser = subparsers.add_parser("gap", parents=[common], help="gap ||P_X - P_Y|| between X and Y")
    pair_arguments(gap_parser)
    gap_parser.set_defaults(handler=gap_command, command_name="gap")

    canon_parser = subparsers.add_parser("canon", parents=[common], help="two-projection canonical form")
    pair_arguments(canon_parser)
    canon_parser.add_argument("--cluster-tol", type=float, default=None, help="angle merge tolerance (rad)")
    canon_parser.set_defaults(handler=canon_command, command_name="canon")


def pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", required=True, help="subspace X (path or inline JSON)")
    parser.add_argument("--y", required=True, help="subspace Y (path or inline JSON)")


def angles_command(args: argparse.Namespace) -> CommandResult:
    x, y = load_subspace(args.x), load_subspace(args.y)
    return CommandResult({"dim_x": x.dim, "dim_y": y.dim, "angles": principal_angles(x, y)})


def gap_command(args: argparse.Namespace) -> CommandResult:
    return CommandResult({"gap": gap(load_subspace(args.x), load_subspace(args.y))})


def canon_command(args: argparse.Namespace) -> CommandResult:
    form = two_projection_form(load_subspace(args.x), load_subspace(args.y), cluster_tol=args.cluster_tol)
    return CommandResult(TwoProjectionFormSchema.from_domain(form))
