"""blend {exists, member, sample, weights} commands."""

import argparse
from typing import Any, Optional

from preserverlab.cli.commands.geometry import pair_arguments
from preserverlab.cli.io import CommandResult, load_matrix, load_subspace
from preserverlab.core.config import settings
from preserverlab.linalg.sampling import make_rng, random_projection, random_unitary
from preserverlab.schemas.geometry import BlendDescriptionSchema, BruteForceSchema
from preserverlab.schemas.matrix import SubspaceSchema
from preserverlab.services.grassmann_service import (
    blend_bound,
    blend_brute_force,
    blend_exists,
    blend_weights,
    gap,
    is_blend_member,
    sample_blend,
    two_projection_form,
)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("blend", help="projections Z with a(P_X + P_Y) + (1 - 2a)P_Z a projection")
    actions = parser.add_subparsers(dest="action", metavar="ACTION", required=True)

    exists = actions.add_parser("exists", parents=[common], help="decide whether the blend set is nonempty")
    _blend_arguments(exists)
    exists.add_argument("--brute-force", action="store_true", help="also search the Bloch sphere (lines only)")
    exists.add_argument("--grid", type=int, default=None, help="Bloch grid side")
    exists.set_defaults(handler=exists_command, command_name="blend exists")

    member = actions.add_parser("member", parents=[common], help="test whether Z belongs to the blend set")
    _blend_arguments(member)
    member.add_argument("--z", required=True, help="candidate subspace Z")
    member.set_defaults(handler=member_command, command_name="blend member")

    sample = actions.add_parser("sample", parents=[common], help="build a member of the blend set")
    _blend_arguments(sample)
    sample.add_argument("--q", default=None, help="projection Q on the exclusive part (a = 1 only)")
    sample.add_argument("--unitary", action="append", default=None, help="block unitary U_j (repeat per block)")
    sample.add_argument("--random", action="store_true", help="draw Q and the U_j at random from --seed")
    sample.set_defaults(handler=sample_command, command_name="blend sample")

    weights = actions.add_parser("weights", parents=[common], help="per-block weights t_j")
    _blend_arguments(weights)
    weights.set_defaults(handler=weights_command, command_name="blend weights")


def _blend_arguments(parser: argparse.ArgumentParser) -> None:
    pair_arguments(parser)
    parser.add_argument("--a", type=float, required=True, help="weight a (> 1/2 except for member)")


def exists_command(args: argparse.Namespace) -> CommandResult:
    x, y = load_subspace(args.x), load_subspace(args.y)
    exists = blend_exists(x, y, args.a, tol=args.tol)
    document: dict[str, Any] = {"exists": exists, "gap": gap(x, y), "bound": blend_bound(args.a)}
    if args.brute_force:
        verdict = blend_brute_force(x, y, args.a, grid=args.grid)
        document["brute_force"] = BruteForceSchema.from_domain(verdict).model_dump(mode="json")
    return CommandResult(document, ok=exists)


def member_command(args: argparse.Namespace) -> CommandResult:
    x, y, z = load_subspace(args.x), load_subspace(args.y), load_subspace(args.z)
    member = is_blend_member(x, y, z, args.a, tol=args.tol)
    return CommandResult({"member": member}, ok=member)


def sample_command(args: argparse.Namespace) -> CommandResult:
    x, y = load_subspace(args.x), load_subspace(args.y)
    q_choice = None if args.q is None else load_matrix(args.q)
    unitaries: Optional[list[Any]] = None if args.unitary is None else [load_matrix(u) for u in args.unitary]
    seed = None
    if args.random:
        seed = settings.default_seed if args.seed is None else args.seed
        rng = make_rng(seed)
        form = two_projection_form(x, y)
        size = form.p + form.q
        if q_choice is None and size:
            q_choice = random_projection(rng, size, int(rng.integers(0, size + 1)))
        if unitaries is None:
            unitaries = [random_unitary(rng, b.multiplicity) for b in form.blocks]
    z = sample_blend(x, y, args.a, q_choice=q_choice, unitaries=unitaries)
    return CommandResult(SubspaceSchema.from_domain(z), seed=seed)


def weights_command(args: argparse.Namespace) -> CommandResult:
    x, y = load_subspace(args.x), load_subspace(args.y)
    description = blend_weights(two_projection_form(x, y), args.a, tol=args.tol)
    return CommandResult(BlendDescriptionSchema.from_domain(description))
