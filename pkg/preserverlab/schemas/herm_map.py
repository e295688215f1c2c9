"""Wire formats for hermitian coordinates and real-linear maps."""

import math

import numpy as np
from pydantic import BaseModel, Field, model_validator

from preserverlab.linalg.herm_space import canonical_basis
from preserverlab.linalg.real_coords import domain_dimension
from preserverlab.models.enums import DomainKind
from preserverlab.models.herm import HermMap, HermVec, RealLinearMatMap


def _herm_count(n: int, traceless: bool) -> int:
    return n * n - 1 if traceless else n * n


def _check_matrix(matrix: list[list[float]], rows: int, cols: int) -> None:
    if len(matrix) != rows or any(len(row) != cols for row in matrix):
        raise ValueError(f"matrix must be {rows}x{cols}")
    if not all(math.isfinite(x) for row in matrix for x in row):
        raise ValueError("matrix entries must be finite")


class HermVecSchema(BaseModel):
    """Coordinates of a hermitian matrix in the canonical basis."""

    n: int = Field(ge=1)
    traceless: bool = False
    coords: list[float]

    @model_validator(mode="after")
    def validate_count(self) -> "HermVecSchema":
        """Coordinate count must match the basis size."""
        expected = _herm_count(self.n, self.traceless)
        if len(self.coords) != expected:
            raise ValueError(f"expected {expected} coordinates, got {len(self.coords)}")
        if not all(math.isfinite(x) for x in self.coords):
            raise ValueError("coordinates must be finite")
        return self

    @classmethod
    def from_domain(cls, v: HermVec) -> "HermVecSchema":
        return cls(n=v.basis.n, traceless=v.basis.traceless, coords=[float(x) for x in v.coords])

    def to_domain(self) -> HermVec:
        return HermVec(
            basis=canonical_basis(self.n, self.traceless),
            coords=np.asarray(self.coords, dtype=np.float64),
        )


class HermMapSchema(BaseModel):
    """Real-linear map H_n_in → H_n_out in canonical basis coordinates."""

    n_in: int = Field(ge=1)
    traceless_in: bool = False
    n_out: int = Field(ge=1)
    traceless_out: bool = False
    matrix: list[list[float]] = Field(description="codomain-count rows, domain-count columns")

    @model_validator(mode="after")
    def validate_shape(self) -> "HermMapSchema":
        """Matrix shape must match both basis sizes."""
        _check_matrix(
            self.matrix,
            _herm_count(self.n_out, self.traceless_out),
            _herm_count(self.n_in, self.traceless_in),
        )
        return self

    @classmethod
    def from_domain(cls, f: HermMap) -> "HermMapSchema":
        return cls(
            n_in=f.domain.n,
            traceless_in=f.domain.traceless,
            n_out=f.codomain.n,
            traceless_out=f.codomain.traceless,
            matrix=f.matrix.tolist(),
        )

    def to_domain(self) -> HermMap:
        domain = canonical_basis(self.n_in, self.traceless_in)
        codomain = canonical_basis(self.n_out, self.traceless_out)
        matrix = np.asarray(self.matrix, dtype=np.float64).reshape(codomain.count, domain.count)
        return HermMap(domain=domain, codomain=codomain, matrix=matrix)

    class Config:
        json_schema_extra = {
            "example": {
                "n_in": 1,
                "traceless_in": False,
                "n_out": 1,
                "traceless_out": False,
                "matrix": [[1.0]],
            }
        }


class RealLinearMapSchema(BaseModel):
    """Real-linear map from H_n, H_n^0, M_n or C^n into M_m."""

    domain_kind: DomainKind
    n_in: int = Field(ge=1)
    n_out: int = Field(ge=1)
    matrix: list[list[float]] = Field(description="2*n_out^2 rows of interleaved (re, im) entries")

    @model_validator(mode="after")
    def validate_shape(self) -> "RealLinearMapSchema":
        """Matrix shape must match the domain kind and the codomain size."""
        _check_matrix(self.matrix, 2 * self.n_out**2, domain_dimension(self.domain_kind, self.n_in))
        return self

    @classmethod
    def from_domain(cls, f: RealLinearMatMap) -> "RealLinearMapSchema":
        return cls(domain_kind=f.domain_kind, n_in=f.n_in, n_out=f.n_out, matrix=f.matrix.tolist())

    def to_domain(self) -> RealLinearMatMap:
        rows = 2 * self.n_out**2
        cols = domain_dimension(self.domain_kind, self.n_in)
        return RealLinearMatMap(
            domain_kind=self.domain_kind,
            n_in=self.n_in,
            n_out=self.n_out,
            matrix=np.asarray(self.matrix, dtype=np.float64).reshape(rows, cols),
        )
