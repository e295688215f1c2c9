"""classify {involution, unitary2, hermitian2, dim2, rank-k} and decompose commands."""

import argparse
from typing import Callable

from preserverlab.cli.io import CommandResult, load_herm_map, load_map
from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter
from preserverlab.models.classification import PreserverClass
from preserverlab.schemas.classification import HalfRankDecompositionSchema, PreserverClassSchema
from preserverlab.services.half_rank_service import (
    check_decomposition,
    classify_two_dimensional,
    decompose_half_rank,
)
from preserverlab.services.involution_service import (
    classify_involution_map,
    factor_hermitian_valued,
    factor_unitary_valued,
)
from preserverlab.services.rank_k_service import classify_rank_k

Engine = Callable[[argparse.Namespace, int], PreserverClass]


def _involution(args: argparse.Namespace, seed: int) -> PreserverClass:
    return classify_involution_map(load_herm_map(args.input), samples=args.samples, seed=seed, tol=args.tol)


def _unitary2(args: argparse.Namespace, seed: int) -> PreserverClass:
    return factor_unitary_valued(load_map(args.input), tol=args.tol)


def _hermitian2(args: argparse.Namespace, seed: int) -> PreserverClass:
    return factor_hermitian_valued(load_herm_map(args.input), tol=args.tol)


def _dim2(args: argparse.Namespace, seed: int) -> PreserverClass:
    return classify_two_dimensional(load_herm_map(args.input), samples=args.samples, seed=seed, tol=args.tol)


def _rank_k(args: argparse.Namespace, seed: int) -> PreserverClass:
    if args.k is None:
        raise BadParameter("k", None, "a rank for classify rank-k")
    return classify_rank_k(
        load_herm_map(args.input), args.k, m=args.m, samples=args.samples, seed=seed, tol=args.tol
    )


# Classification engines by CLI name
_ENGINES: dict[str, Engine] = {
    "involution": _involution,
    "unitary2": _unitary2,
    "hermitian2": _hermitian2,
    "dim2": _dim2,
    "rank-k": _rank_k,
}


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("classify", help="recover the form of a preserver")
    engines = parser.add_subparsers(dest="engine", metavar="ENGINE", required=True)
    for name in _ENGINES:
        engine = engines.add_parser(name, parents=[common], help=f"{name} classification")
        engine.add_argument("--input", required=True, help="map document (path or inline JSON)")
        if name == "rank-k":
            engine.add_argument("--k", type=int, default=None, help="rank of the preserved projections")
            engine.add_argument("--m", type=int, default=None, help="expected image rank")
        engine.set_defaults(handler=classify_command, command_name=f"classify {name}")

    decompose = subparsers.add_parser(
        "decompose", parents=[common], help="block structure of a rank-k preserver on H_2k"
    )
    decompose.add_argument("--input", required=True, help="map document (path or inline JSON)")
    decompose.add_argument("--k", type=int, required=True, help="half the domain size")
    decompose.add_argument("--check", action="store_true", help="add structural diagnostics")
    decompose.set_defaults(handler=decompose_command, command_name="decompose")


def classify_command(args: argparse.Namespace) -> CommandResult:
    seed = settings.default_seed if args.seed is None else args.seed
    result = _ENGINES[args.engine](args, seed)
    return CommandResult(PreserverClassSchema.from_domain(result), ok=result.is_preserver, seed=seed)


def decompose_command(args: argparse.Namespace) -> CommandResult:
    seed = settings.default_seed if args.seed is None else args.seed
    dec = decompose_half_rank(load_herm_map(args.input), args.k, samples=args.samples, seed=seed, tol=args.tol)
    check = check_decomposition(dec, samples=args.samples, seed=seed) if args.check else None
    return CommandResult(HalfRankDecompositionSchema.from_domain(dec, check), seed=seed)
