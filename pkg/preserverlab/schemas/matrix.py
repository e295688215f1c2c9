"""Matrix and subspace wire formats."""

import math

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, model_validator

from preserverlab.models.geometry import Subspace
from preserverlab.models.matrices import ComplexMatrix
from preserverlab.services.grassmann_service import make_subspace


class ComplexMatrixSchema(BaseModel):
    """Dense complex matrix, row-major, each entry as [re, im]."""

    rows: int = Field(ge=0, description="Row count")
    cols: int = Field(ge=0, description="Column count")
    data: list[tuple[float, float]] = Field(description="Row-major [re, im] pairs")

    @model_validator(mode="after")
    def validate_entries(self) -> "ComplexMatrixSchema":
        """Entry count must match the shape and every entry must be finite."""
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.data)}")
        if not all(math.isfinite(re) and math.isfinite(im) for re, im in self.data):
            raise ValueError("matrix entries must be finite")
        return self

    @classmethod
    def from_domain(cls, a: npt.ArrayLike) -> "ComplexMatrixSchema":
        arr = np.atleast_2d(np.asarray(a, dtype=np.complex128))
        flat = arr.reshape(-1)
        return cls(
            rows=arr.shape[0],
            cols=arr.shape[1],
            data=[(float(z.real), float(z.imag)) for z in flat],
        )

    def to_domain(self) -> ComplexMatrix:
        if not self.data:
            return np.zeros((self.rows, self.cols), dtype=np.complex128)
        pairs = np.asarray(self.data, dtype=np.float64)
        return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(self.rows, self.cols)

    class Config:
        json_schema_extra = {
            "example": {"rows": 2, "cols": 1, "data": [[1.0, 0.0], [0.0, 0.0]]},
        }


class SubspaceSchema(BaseModel):
    """Subspace given by an orthonormal frame."""

    ambient: int = Field(ge=1, description="Ambient dimension n of C^n")
    frame: ComplexMatrixSchema

    @model_validator(mode="after")
    def validate_frame_rows(self) -> "SubspaceSchema":
        """Frame must have one row per ambient coordinate."""
        if self.frame.rows != self.ambient:
            raise ValueError(f"frame has {self.frame.rows} rows, ambient is {self.ambient}")
        return self

    @classmethod
    def from_domain(cls, x: Subspace) -> "SubspaceSchema":
        return cls(ambient=x.ambient, frame=ComplexMatrixSchema.from_domain(x.frame))

    def to_domain(self) -> Subspace:
        """Rebuild the subspace; the frame must be an isometry."""
        return make_subspace(self.frame.to_domain())

    class Config:
        json_schema_extra = {
            "example": {
                "ambient": 2,
                "frame": {"rows": 2, "cols": 1, "data": [[1.0, 0.0], [0.0, 0.0]]},
            }
        }
