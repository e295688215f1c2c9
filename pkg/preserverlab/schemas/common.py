"""Common schemas for the output envelope and error responses."""

from typing import Any, Optional

from pydantic import BaseModel, Field

from preserverlab.core.config import Settings, settings


class ErrorResponse(BaseModel):
    """Standard error response."""

    error_code: str = Field(description="Machine-readable error code")
    message: str = Field(description="Human-readable error message")
    details: Optional[dict[str, Any]] = Field(default=None, description="Additional error details")

    class Config:
        json_schema_extra = {
            "example": {
                "error_code": "NOT_HERMITIAN",
                "message": "Matrix is not hermitian (deviation 1.0e-03 exceeds 1.0e-10)",
                "details": {"deviation": 1e-3, "tolerance": 1e-10},
            }
        }


class ToleranceSet(BaseModel):
    """Tolerance scale factors in force for a run."""

    tol_eig_scale: float = Field(gt=0)
    tol_sym_scale: float = Field(gt=0)
    tol_rank: float = Field(gt=0, lt=1)
    tol_canon_scale: float = Field(gt=0)
    cluster_tol: float = Field(gt=0)
    tol_classify_scale: float = Field(gt=0)
    override: Optional[float] = Field(default=None, gt=0, description="Explicit --tol passed to the command")

    @classmethod
    def from_settings(cls, config: Settings = settings, override: Optional[float] = None) -> "ToleranceSet":
        return cls(**config.tolerance_set(), override=override)


class ToolOutput(BaseModel):
    """Envelope of every CLI result document."""

    tool: str = Field(description="Tool name")
    version: str = Field(description="Tool version")
    command: str = Field(description="Subcommand path, e.g. 'classify rank-k'")
    seed: Optional[int] = Field(default=None, description="Seed used by randomized steps")
    tolerances: ToleranceSet
    result: Any = Field(description="Command-specific result document")

    @classmethod
    def create(
        cls,
        command: str,
        result: Any,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> "ToolOutput":
        """Wrap a result with the tool identity and the tolerances in force."""
        return cls(
            tool=settings.app_name,
            version=settings.app_version,
            command=command,
            seed=seed,
            tolerances=ToleranceSet.from_settings(override=tol),
            result=result,
        )

    class Config:
        json_schema_extra = {
            "example": {
                "tool": "preserver-lab",
                "version": "1.0.0",
                "command": "gap",
                "seed": None,
                "tolerances": {
                    "tol_eig_scale": 1e-12,
                    "tol_sym_scale": 1e-10,
                    "tol_rank": 1e-9,
                    "tol_canon_scale": 1e-9,
                    "cluster_tol": 1e-7,
                    "tol_classify_scale": 1e-8,
                    "override": None,
                },
                "result": {"gap": 1.0},
            }
        }
