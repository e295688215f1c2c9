"""verify and unitary-pair commands."""

import argparse

from preserverlab.cli.io import CommandResult, load_herm_map, load_map, load_matrix
from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter, RankNotConstant
from preserverlab.models.enums import DomainKind
from preserverlab.models.herm import HermMap
from preserverlab.schemas.classification import CollisionSchema, UnitaryPairSchema, VerificationSchema
from preserverlab.services.construction_service import (
    find_collision,
    verify_admissible,
    verify_unitary_images,
)
from preserverlab.services.involution_service import unitary_pair_decompose, verify_involution_images
from preserverlab.services.rank_k_service import verify_preserves


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("verify", parents=[common], help="randomized check of a map's image property")
    parser.add_argument("--input", required=True, help="map document (path or inline JSON)")
    parser.add_argument("--k", type=int, default=None, help="rank of the preserved projections")
    parser.add_argument(
        "--involutions",
        action="store_true",
        help="check that traceless involutions go to traceless involutions",
    )
    parser.add_argument("--collision", action="store_true", help="search for two projections with equal images")
    parser.set_defaults(handler=verify_command, command_name="verify")

    pair = subparsers.add_parser(
        "unitary-pair", parents=[common], help="simultaneous form of X, Y with X +- Y unitary"
    )
    pair.add_argument("--x", required=True, help="matrix X")
    pair.add_argument("--y", required=True, help="matrix Y")
    pair.set_defaults(handler=unitary_pair_command, command_name="unitary-pair")


def verify_command(args: argparse.Namespace) -> CommandResult:
    """
    Rank-k preservers are checked with --k; maps into M_m without --k are
    checked for unitary images (admissibility when the domain is traceless).
    """
    seed = settings.default_seed if args.seed is None else args.seed
    f = load_map(args.input)

    if args.collision:
        if args.k is None:
            raise BadParameter("k", None, "a rank for the collision search")
        witness = find_collision(load_herm_map(args.input), args.k, trials=args.samples, seed=seed, tol=args.tol)
        return CommandResult(CollisionSchema.from_domain(witness), seed=seed)

    if args.involutions:
        if not isinstance(f, HermMap):
            raise BadParameter("input", f.domain_kind.value, "a map between hermitian spaces")
        report = verify_involution_images(f, samples=args.samples, seed=seed, tol=args.tol)
    elif isinstance(f, HermMap):
        if args.k is None:
            raise BadParameter("k", None, "a rank for a map between hermitian spaces")
        report = verify_preserves(f, args.k, samples=args.samples, seed=seed, tol=args.tol)
        if len(report.ranks) > 1:
            raise RankNotConstant(list(report.ranks))
    elif f.domain_kind == DomainKind.HERM0:
        report = verify_admissible(f, samples=args.samples, seed=seed, tol=args.tol)
    else:
        report = verify_unitary_images(f, samples=args.samples, seed=seed, tol=args.tol)
    return CommandResult(VerificationSchema.from_domain(report), ok=report.ok, seed=seed)


def unitary_pair_command(args: argparse.Namespace) -> CommandResult:
    dec = unitary_pair_decompose(load_matrix(args.x), load_matrix(args.y), tol=args.tol)
    return CommandResult(UnitaryPairSchema.from_domain(dec))
