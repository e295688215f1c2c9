"""basis {encode, decode} commands."""

import argparse

from preserverlab.cli.io import CommandResult, load_herm_vec, load_matrix
from preserverlab.linalg.herm_space import canonical_basis, decode, encode
from preserverlab.schemas.herm_map import HermVecSchema
from preserverlab.schemas.matrix import ComplexMatrixSchema


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("basis", help="coordinates in the canonical hermitian basis")
    actions = parser.add_subparsers(dest="action", metavar="ACTION", required=True)

    enc = actions.add_parser("encode", parents=[common], help="hermitian matrix to coordinates")
    enc.add_argument("--input", required=True, help="hermitian matrix (path or inline JSON)")
    enc.add_argument("--traceless", action="store_true", help="use the traceless basis")
    enc.set_defaults(handler=encode_command, command_name="basis encode")

    dec = actions.add_parser("decode", parents=[common], help="coordinates to hermitian matrix")
    dec.add_argument("--input", required=True, help="coordinate document (path or inline JSON)")
    dec.set_defaults(handler=decode_command, command_name="basis decode")


def encode_command(args: argparse.Namespace) -> CommandResult:
    a = load_matrix(args.input)
    vec = encode(a, canonical_basis(a.shape[0], args.traceless), tol=args.tol)
    return CommandResult(HermVecSchema.from_domain(vec))


def decode_command(args: argparse.Namespace) -> CommandResult:
    return CommandResult(ComplexMatrixSchema.from_domain(decode(load_herm_vec(args.input).to_domain())))
