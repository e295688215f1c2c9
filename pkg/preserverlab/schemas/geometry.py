"""Canonical form and blend-set schemas."""

import math
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from preserverlab.models.geometry import (
    AngleBlock,
    BlendDescription,
    BruteForceVerdict,
    TwoProjectionForm,
)
from preserverlab.schemas.matrix import ComplexMatrixSchema


class AngleBlockSchema(BaseModel):
    """One angle family of the canonical form."""

    angle: float = Field(gt=0.0, lt=math.pi / 2, description="Angle in radians, strictly inside (0, pi/2)")
    multiplicity: int = Field(ge=1)


class TwoProjectionFormSchema(BaseModel):
    """Canonical basis of X + Y and the block data of P_X, P_Y in it."""

    ambient: int = Field(ge=1)
    basis: ComplexMatrixSchema
    m: int = Field(ge=0, description="dim X ∩ Y")
    p: int = Field(ge=0, description="dim X ∩ Y^perp")
    q: int = Field(ge=0, description="dim Y ∩ X^perp")
    blocks: list[AngleBlockSchema] = Field(default_factory=list, description="Strictly decreasing angles")

    @model_validator(mode="after")
    def validate_layout(self) -> "TwoProjectionFormSchema":
        """Basis width must equal m + p + q + 2·Σ m_j; angles strictly decrease."""
        width = self.m + self.p + self.q + 2 * sum(b.multiplicity for b in self.blocks)
        if self.basis.rows != self.ambient or self.basis.cols != width:
            raise ValueError(f"basis must be {self.ambient}x{width}")
        angles = [b.angle for b in self.blocks]
        if any(a <= b for a, b in zip(angles, angles[1:])):
            raise ValueError("block angles must be strictly decreasing")
        return self

    @classmethod
    def from_domain(cls, form: TwoProjectionForm) -> "TwoProjectionFormSchema":
        return cls(
            ambient=form.ambient,
            basis=ComplexMatrixSchema.from_domain(form.basis),
            m=form.m,
            p=form.p,
            q=form.q,
            blocks=[AngleBlockSchema(angle=b.angle, multiplicity=b.multiplicity) for b in form.blocks],
        )

    def to_domain(self) -> TwoProjectionForm:
        return TwoProjectionForm(
            ambient=self.ambient,
            basis=self.basis.to_domain(),
            m=self.m,
            p=self.p,
            q=self.q,
            blocks=tuple(AngleBlock(angle=b.angle, multiplicity=b.multiplicity) for b in self.blocks),
        )


class BlendDescriptionSchema(BaseModel):
    """Per-block weights of a blend set."""

    form: TwoProjectionFormSchema
    a: float = Field(gt=0.5)
    t: list[float] = Field(description="Weight t_j in [0, 1] for each angle block")
    admissible: bool
    flagged: list[int] = Field(default_factory=list, description="Blocks whose weight left [0, 1]")

    @model_validator(mode="after")
    def validate_weights(self) -> "BlendDescriptionSchema":
        """One weight per angle block; unflagged weights lie in [0, 1]."""
        if len(self.t) != len(self.form.blocks):
            raise ValueError("one weight per angle block is required")
        if any(not 0.0 <= t <= 1.0 for j, t in enumerate(self.t) if j not in self.flagged):
            raise ValueError("unflagged weights must lie in [0, 1]")
        if self.admissible and self.flagged:
            raise ValueError("a description with flagged blocks is not admissible")
        return self

    @classmethod
    def from_domain(cls, desc: BlendDescription) -> "BlendDescriptionSchema":
        return cls(
            form=TwoProjectionFormSchema.from_domain(desc.form),
            a=desc.a,
            t=list(desc.t),
            admissible=desc.admissible,
            flagged=list(desc.flagged),
        )

    def to_domain(self) -> BlendDescription:
        return BlendDescription(
            form=self.form.to_domain(),
            a=self.a,
            t=tuple(self.t),
            admissible=self.admissible,
            flagged=tuple(self.flagged),
        )


class BruteForceSchema(BaseModel):
    """Bloch-sphere search verdict for rank-one blends."""

    exists: bool
    min_residual: float = Field(ge=0.0)
    grid_points: int = Field(ge=1)
    best_point: Optional[tuple[float, float]] = None

    @classmethod
    def from_domain(cls, verdict: BruteForceVerdict) -> "BruteForceSchema":
        return cls(
            exists=verdict.exists,
            min_residual=verdict.min_residual,
            grid_points=verdict.grid_points,
            best_point=verdict.best_point,
        )

    def to_domain(self) -> BruteForceVerdict:
        return BruteForceVerdict(
            exists=self.exists,
            min_residual=self.min_residual,
            grid_points=self.grid_points,
            best_point=self.best_point,
        )
