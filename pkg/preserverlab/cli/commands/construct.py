"""construct <generator> command."""

import argparse
from typing import Any

from preserverlab.cli.io import CommandResult, load_map, load_matrix
from preserverlab.core.config import settings
from preserverlab.generators.factory import get_generator, get_registered_generators
from preserverlab.linalg.sampling import make_rng
from preserverlab.models.herm import HermMap
from preserverlab.schemas.herm_map import HermMapSchema, RealLinearMapSchema

# Flags read as matrix documents
_MATRIX_PARAMS = ("u", "p0", "q0", "v0")
_SCALAR_PARAMS = ("k", "m", "n", "t", "phi")


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    names = get_registered_generators()
    parser = subparsers.add_parser("construct", parents=[common], help="build one of the example maps")
    parser.add_argument("generator", choices=names, help="registered example map")
    parser.add_argument("--k", type=int, default=None, help="rank of the preserved projections")
    parser.add_argument("--m", type=int, default=None, help="size of the trace complement")
    parser.add_argument("--n", type=int, default=None, help="domain size H_n")
    parser.add_argument("--t", type=float, default=None, help="dilation weight in [0, 1]")
    parser.add_argument("--phi", type=float, default=None, help="rotation angle")
    parser.add_argument("--conj", action="store_true", help="conjugate entrywise before the congruence")
    for name in _MATRIX_PARAMS:
        parser.add_argument(f"--{name}", default=None, help=f"matrix {name} (path or inline JSON)")
    parser.add_argument("--tau", default=None, help="admissible map for the dilation (path or inline JSON)")
    parser.add_argument("--random", action="store_true", help="draw all parameters at random from --seed")
    parser.set_defaults(handler=construct_command, command_name="construct")


def construct_command(args: argparse.Namespace) -> CommandResult:
    generator = get_generator(args.generator)
    seed = None
    if args.random:
        seed = settings.default_seed if args.seed is None else args.seed
        params: dict[str, Any] = generator.random_params(make_rng(seed))
    else:
        params = {name: getattr(args, name) for name in _SCALAR_PARAMS}
        params.update({name: load_matrix(getattr(args, name)) for name in _MATRIX_PARAMS if getattr(args, name)})
        params["conj"] = args.conj
        params["tau"] = None if args.tau is None else load_map(args.tau)
        params["samples"] = args.samples
        params["seed"] = args.seed
        seed = args.seed
    f = generator.build(params).map
    document = HermMapSchema.from_domain(f) if isinstance(f, HermMap) else RealLinearMapSchema.from_domain(f)
    return CommandResult(document, seed=seed)
