"""Classification, verification and decomposition schemas."""

import math
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from preserverlab.models.classification import (
    CollisionWitness,
    DecompositionCheck,
    HalfRankDecomposition,
    PreserverClass,
    UnitaryPairDecomposition,
    VerificationReport,
)
from preserverlab.models.enums import PreserverTag
from preserverlab.models.matrices import ComplexMatrix
from preserverlab.schemas.herm_map import HermMapSchema, RealLinearMapSchema
from preserverlab.schemas.matrix import ComplexMatrixSchema


def _finite(value: float) -> Optional[float]:
    """JSON has no infinities; an unbounded residual is sent as null."""
    return float(value) if math.isfinite(value) else None


def _residual(value: Optional[float]) -> float:
    return float("inf") if value is None else value


def _matrix(a: Optional[ComplexMatrix]) -> Optional[ComplexMatrixSchema]:
    return None if a is None else ComplexMatrixSchema.from_domain(a)


def _array(schema: Optional[ComplexMatrixSchema]) -> Optional[ComplexMatrix]:
    return None if schema is None else schema.to_domain()


# Parameters each tag must carry
_REQUIRED: dict[PreserverTag, tuple[str, ...]] = {
    PreserverTag.CONSTANT: ("p0",),
    PreserverTag.CONGRUENCE: ("u", "conj"),
    PreserverTag.COMPLEMENTED_CONGRUENCE: ("u", "conj"),
    PreserverTag.DIM2_TENSOR: ("u", "p0", "q0"),
    PreserverTag.TRACE_ZERO_UNITARY_FORM: ("u", "s", "conj"),
    PreserverTag.UNITARY_TENSOR_FORM: ("u", "v", "n"),
    PreserverTag.SIGNED_TENSOR_FORM: ("u", "p", "q"),
    PreserverTag.NOT_A_PRESERVER: ("reason",),
}


class PreserverClassSchema(BaseModel):
    """Tagged classification result with the recovered parameters."""

    tag: PreserverTag
    residual: Optional[float] = Field(default=None, ge=0.0, description="Largest probe error; null if unbounded")
    u: Optional[ComplexMatrixSchema] = None
    v: Optional[ComplexMatrixSchema] = None
    p0: Optional[ComplexMatrixSchema] = None
    q0: Optional[ComplexMatrixSchema] = None
    constant_part: Optional[ComplexMatrixSchema] = None
    s: Optional[int] = Field(default=None, description="Sign, +1 or -1")
    conj: Optional[bool] = None
    n: Optional[int] = Field(default=None, ge=1)
    p: Optional[int] = Field(default=None, ge=0)
    q: Optional[int] = Field(default=None, ge=0)
    reason: Optional[str] = None

    @model_validator(mode="after")
    def validate_tag_fields(self) -> "PreserverClassSchema":
        """Each tag carries its own parameters."""
        missing = [name for name in _REQUIRED[self.tag] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"tag {self.tag.value} requires {', '.join(missing)}")
        if self.s is not None and self.s not in (-1, 1):
            raise ValueError("s must be +1 or -1")
        return self

    @classmethod
    def from_domain(cls, result: PreserverClass) -> "PreserverClassSchema":
        return cls(
            tag=result.tag,
            residual=_finite(result.residual),
            u=_matrix(result.u),
            v=_matrix(result.v),
            p0=_matrix(result.p0),
            q0=_matrix(result.q0),
            constant_part=_matrix(result.constant_part),
            s=result.s,
            conj=result.conj,
            n=result.n,
            p=result.p,
            q=result.q,
            reason=result.reason,
        )

    def to_domain(self) -> PreserverClass:
        return PreserverClass(
            tag=self.tag,
            residual=_residual(self.residual),
            u=_array(self.u),
            v=_array(self.v),
            p0=_array(self.p0),
            q0=_array(self.q0),
            constant_part=_array(self.constant_part),
            s=self.s,
            conj=self.conj,
            n=self.n,
            p=self.p,
            q=self.q,
            reason=self.reason,
        )

    class Config:
        json_schema_extra = {
            "example": {
                "tag": "constant",
                "residual": 3.1e-16,
                "p0": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
            }
        }


class VerificationSchema(BaseModel):
    """Randomized verification outcome."""

    ok: bool
    m: Optional[int] = Field(default=None, ge=0, description="Image rank when constant")
    worst_residual: Optional[float] = Field(default=None, ge=0.0)
    samples: int = Field(ge=0)
    ranks: list[int] = Field(default_factory=list, description="Distinct image ranks observed")
    reason: Optional[str] = None

    @classmethod
    def from_domain(cls, report: VerificationReport) -> "VerificationSchema":
        return cls(
            ok=report.ok,
            m=report.m,
            worst_residual=_finite(report.worst_residual),
            samples=report.samples,
            ranks=list(report.ranks),
            reason=report.reason,
        )

    def to_domain(self) -> VerificationReport:
        return VerificationReport(
            ok=self.ok,
            m=self.m,
            worst_residual=_residual(self.worst_residual),
            samples=self.samples,
            ranks=tuple(self.ranks),
            reason=self.reason,
        )


class DecompositionCheckSchema(BaseModel):
    """Structural diagnostics of a half-rank decomposition."""

    phi0_involution_defect: float = Field(ge=0.0)
    phij_unitary_defects: list[float]
    block_bound_ok: bool
    p_bound_ok: bool

    @classmethod
    def from_domain(cls, check: DecompositionCheck) -> "DecompositionCheckSchema":
        return cls(
            phi0_involution_defect=check.phi0_involution_defect,
            phij_unitary_defects=list(check.phij_unitary_defects),
            block_bound_ok=check.block_bound_ok,
            p_bound_ok=check.p_bound_ok,
        )


class HalfRankDecompositionSchema(BaseModel):
    """Block structure of a rank-k projection preserver on H_2k."""

    k: int = Field(ge=1)
    n_out: int = Field(ge=1)
    m: int = Field(ge=0)
    p: int = Field(ge=0)
    t: list[float] = Field(description="Block weights, strictly increasing in (1/2, 1)")
    mult: list[int]
    basis: ComplexMatrixSchema
    phi0: Optional[HermMapSchema] = None
    phij: list[RealLinearMapSchema] = Field(default_factory=list)
    residual: float = Field(ge=0.0)
    check: Optional[DecompositionCheckSchema] = None

    @model_validator(mode="after")
    def validate_blocks(self) -> "HalfRankDecompositionSchema":
        """Block lists agree in length and the basis spans m + 2p + 2·Σ m_j columns."""
        if not len(self.t) == len(self.mult) == len(self.phij):
            raise ValueError("t, mult and phij must have one entry per block")
        if (self.p > 0) != (self.phi0 is not None):
            raise ValueError("phi0 is present exactly when p > 0")
        width = self.m + 2 * self.p + 2 * sum(self.mult)
        if self.basis.rows != self.n_out or self.basis.cols != width:
            raise ValueError(f"basis must be {self.n_out}x{width}")
        return self

    @classmethod
    def from_domain(
        cls, dec: HalfRankDecomposition, check: Optional[DecompositionCheck] = None
    ) -> "HalfRankDecompositionSchema":
        return cls(
            k=dec.k,
            n_out=dec.n_out,
            m=dec.m,
            p=dec.p,
            t=list(dec.t),
            mult=list(dec.mult),
            basis=ComplexMatrixSchema.from_domain(dec.basis),
            phi0=None if dec.phi0 is None else HermMapSchema.from_domain(dec.phi0),
            phij=[RealLinearMapSchema.from_domain(phi) for phi in dec.phij],
            residual=dec.residual,
            check=None if check is None else DecompositionCheckSchema.from_domain(check),
        )

    def to_domain(self) -> HalfRankDecomposition:
        return HalfRankDecomposition(
            k=self.k,
            n_out=self.n_out,
            m=self.m,
            p=self.p,
            t=tuple(self.t),
            mult=tuple(self.mult),
            basis=self.basis.to_domain(),
            phi0=None if self.phi0 is None else self.phi0.to_domain(),
            phij=tuple(phi.to_domain() for phi in self.phij),
            residual=self.residual,
        )


class UnitaryPairSchema(BaseModel):
    """Simultaneous form of X, Y with X ± Y unitary."""

    u: ComplexMatrixSchema
    v: ComplexMatrixSchema
    p: int = Field(ge=0)
    q: int = Field(ge=0)
    blocks: list[tuple[float, int]] = Field(description="(s_j, m_j) with 1 > s_1 > ... > 0")
    w: ComplexMatrixSchema
    h: list[ComplexMatrixSchema]
    residual: float = Field(ge=0.0)

    @model_validator(mode="after")
    def validate_blocks(self) -> "UnitaryPairSchema":
        """One hermitian unitary per block, sized by its multiplicity."""
        if len(self.h) != len(self.blocks):
            raise ValueError("one H_j per block is required")
        for (s, size), h in zip(self.blocks, self.h):
            if not 0.0 < s < 1.0 or h.rows != size or h.cols != size:
                raise ValueError("blocks need 0 < s_j < 1 and H_j of size m_j")
        return self

    @classmethod
    def from_domain(cls, dec: UnitaryPairDecomposition) -> "UnitaryPairSchema":
        return cls(
            u=ComplexMatrixSchema.from_domain(dec.u),
            v=ComplexMatrixSchema.from_domain(dec.v),
            p=dec.p,
            q=dec.q,
            blocks=[(float(s), int(size)) for s, size in dec.blocks],
            w=ComplexMatrixSchema.from_domain(dec.w),
            h=[ComplexMatrixSchema.from_domain(h) for h in dec.h],
            residual=dec.residual,
        )

    def to_domain(self) -> UnitaryPairDecomposition:
        return UnitaryPairDecomposition(
            u=self.u.to_domain(),
            v=self.v.to_domain(),
            p=self.p,
            q=self.q,
            blocks=tuple(self.blocks),
            w=self.w.to_domain(),
            h=tuple(h.to_domain() for h in self.h),
            residual=self.residual,
        )


class CollisionSchema(BaseModel):
    """Two distinct rank-k projections with equal images."""

    found: bool
    first: Optional[ComplexMatrixSchema] = None
    second: Optional[ComplexMatrixSchema] = None
    image_distance: Optional[float] = Field(default=None, ge=0.0)
    trials: int = Field(ge=0)

    @classmethod
    def from_domain(cls, witness: CollisionWitness) -> "CollisionSchema":
        return cls(
            found=witness.found,
            first=_matrix(witness.first),
            second=_matrix(witness.second),
            image_distance=_finite(witness.image_distance),
            trials=witness.trials,
        )
