"""Reading input documents and writing result envelopes."""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel

from preserverlab.core.exceptions import InvalidInput
from preserverlab.models.enums import OutputFormat
from preserverlab.models.geometry import Subspace
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix
from preserverlab.schemas.common import ToolOutput
from preserverlab.schemas.herm_map import HermMapSchema, HermVecSchema, RealLinearMapSchema
from preserverlab.schemas.matrix import ComplexMatrixSchema, SubspaceSchema


@dataclass
class CommandResult:
    """What a command handler hands back to the entry point."""

    result: Union[BaseModel, dict[str, Any]]
    ok: bool = True
    seed: Optional[int] = None
    text: Optional[str] = None  # pretty rendering, used instead of indented JSON


def read_json(ref: str) -> Any:
    """
    Load a JSON document from a path, or parse ``ref`` itself when it is inline JSON.

    Result envelopes written by this tool are unwrapped to their ``result``.
    """
    text = ref if ref.lstrip()[:1] in ("{", "[") else None
    if text is None:
        path = Path(ref)
        if not path.is_file():
            raise InvalidInput(f"Input file '{ref}' not found", details={"path": ref})
        text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"Malformed JSON in '{ref[:60]}': {exc.msg}", details={"line": exc.lineno}) from exc
    if isinstance(data, dict) and "tool" in data and "result" in data:
        data = data["result"]
    return data


def load_matrix(ref: str) -> ComplexMatrix:
    """Matrix document, or a bare nested list of real numbers."""
    data = read_json(ref)
    if isinstance(data, list):
        try:
            return np.atleast_2d(np.asarray(data, dtype=np.float64)).astype(np.complex128)
        except (TypeError, ValueError) as exc:
            raise InvalidInput("Nested list is not a numeric matrix") from exc
    return ComplexMatrixSchema.model_validate(data).to_domain()


def load_subspace(ref: str) -> Subspace:
    return SubspaceSchema.model_validate(read_json(ref)).to_domain()


def load_map(ref: str) -> Union[HermMap, RealLinearMatMap]:
    """HermMap or RealLinearMatMap document (told apart by ``domain_kind``)."""
    data = read_json(ref)
    if isinstance(data, dict) and "domain_kind" in data:
        return RealLinearMapSchema.model_validate(data).to_domain()
    return HermMapSchema.model_validate(data).to_domain()


def load_herm_map(ref: str) -> HermMap:
    f = load_map(ref)
    if not isinstance(f, HermMap):
        raise InvalidInput("Expected a map between hermitian spaces", details={"domain_kind": f.domain_kind.value})
    return f


def load_herm_vec(ref: str) -> HermVecSchema:
    return HermVecSchema.model_validate(read_json(ref))


def emit(command: str, outcome: CommandResult, args: argparse.Namespace) -> None:
    """Wrap the result in the tool envelope and write it to --output or stdout."""
    result = outcome.result
    document = result.model_dump(mode="json") if isinstance(result, BaseModel) else result
    output = ToolOutput.create(command, document, seed=outcome.seed, tol=getattr(args, "tol", None))
    if args.format == OutputFormat.PRETTY.value:
        body = outcome.text if outcome.text is not None else output.model_dump_json(indent=2)
    else:
        body = output.model_dump_json()
    if args.output:
        Path(args.output).write_text(body + "\n", encoding="utf-8")
    else:
        sys.stdout.write(body + "\n")
