"""Subspaces and two-subspace canonical data."""

from dataclasses import dataclass, field
from typing import Optional

from preserverlab.models.matrices import ComplexMatrix


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^ambient given by an orthonormal frame (ambient × dim)."""

    ambient: int
    frame: ComplexMatrix = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.frame.shape[1])


@dataclass(frozen=True)
class AngleBlock:
    """One 2×2-block family of the canonical form: angle and multiplicity."""

    angle: float
    multiplicity: int


@dataclass(frozen=True)
class TwoProjectionForm:
    """Canonical form of a pair of projections P_X, P_Y on X + Y.

    Basis columns are ordered as: m vectors of X∩Y, p of X∩Y^⊥, q of Y∩X^⊥,
    then for each block j its m_j "first" vectors followed by its m_j
    "second" vectors. Block angles are strictly decreasing.
    """

    ambient: int
    basis: ComplexMatrix = field(repr=False)
    m: int
    p: int
    q: int
    blocks: tuple[AngleBlock, ...] = ()

    @property
    def dim(self) -> int:
        return self.m + self.p + self.q + 2 * sum(b.multiplicity for b in self.blocks)

    def block_slices(self) -> list[tuple[slice, slice]]:
        """Return (first, second) column slices of every angle block."""
        slices = []
        offset = self.m + self.p + self.q
        for block in self.blocks:
            first = slice(offset, offset + block.multiplicity)
            second = slice(offset + block.multiplicity, offset + 2 * block.multiplicity)
            slices.append((first, second))
            offset += 2 * block.multiplicity
        return slices


@dataclass(frozen=True)
class BlendDescription:
    """Per-block weights t_j describing the blend set for a given a."""

    form: TwoProjectionForm
    a: float
    t: tuple[float, ...]
    admissible: bool
    flagged: tuple[int, ...] = ()


@dataclass(frozen=True)
class BruteForceVerdict:
    """Outcome of the Bloch-sphere search over rank-one Z in X + Y."""

    exists: bool
    min_residual: float
    grid_points: int
    best_point: Optional[tuple[float, float]] = None
