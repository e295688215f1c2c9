"""Pytest configuration and fixtures for preserverlab tests."""

import json
from typing import Any, Callable

import numpy as np
import pytest

from preserverlab.cli.main import run
from preserverlab.linalg.sampling import random_isometry, random_projection
from preserverlab.models.geometry import Subspace
from preserverlab.schemas.herm_map import HermMapSchema
from preserverlab.schemas.matrix import SubspaceSchema
from preserverlab.services.construction_service import make_congruence, make_trace_complement
from preserverlab.services.grassmann_service import make_subspace

# Fixed seed for fixture data; tests that need other draws make their own generator
TEST_SEED = 1234


# ============================================================================
# Random Generator Fixtures
# ============================================================================


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(TEST_SEED)


# ============================================================================
# Subspace Fixtures
# ============================================================================


def line(*coords: complex) -> Subspace:
    """Line in C^n spanned by the normalized vector ``coords``."""
    v = np.asarray(coords, dtype=np.complex128)
    return make_subspace((v / np.linalg.norm(v)).reshape(-1, 1))


@pytest.fixture
def x_axis() -> Subspace:
    """Line spanned by e1 in C^2."""
    return line(1, 0)


@pytest.fixture
def y_axis() -> Subspace:
    """Line spanned by e2 in C^2."""
    return line(0, 1)


@pytest.fixture
def diagonal() -> Subspace:
    """Line spanned by e1 + e2 in C^2 (angle pi/4 to both axes)."""
    return line(1, 1)


# ============================================================================
# Map Fixtures
# ============================================================================


@pytest.fixture
def congruence_map(rng):
    """A -> U A U* with U a 5x3 isometry."""
    return make_congruence(random_isometry(rng, 5, 3))


@pytest.fixture
def complement_map():
    """Trace complement L_2 on H_5 (rank 2 to rank 3)."""
    return make_trace_complement(2, 5)


@pytest.fixture
def rank_two_projection(rng) -> np.ndarray:
    """Random rank-2 projection in H_4."""
    return random_projection(rng, 4, 2)


# ============================================================================
# CLI Fixtures
# ============================================================================


def subspace_json(x: Subspace) -> str:
    """Inline JSON document for a subspace."""
    return SubspaceSchema.from_domain(x).model_dump_json()


def map_json(f) -> str:
    """Inline JSON document for a HermMap."""
    return HermMapSchema.from_domain(f).model_dump_json()


@pytest.fixture
def cli(capsys) -> Callable[..., tuple[int, Any]]:
    """Run the CLI and return (exit code, parsed stdout document)."""

    def invoke(*argv: str) -> tuple[int, Any]:
        code = run(list(argv))
        out = capsys.readouterr().out.strip()
        document = json.loads(out.splitlines()[-1]) if out else None
        return code, document

    return invoke
