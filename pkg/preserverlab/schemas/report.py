"""Self-test and search report schemas."""

from typing import Optional

from pydantic import BaseModel, Field, model_validator

from preserverlab.models.classification import SearchReport
from preserverlab.models.report import PropertyCheck, SelfTestReport


class PropertyCheckSchema(BaseModel):
    """One invariant check of the self-test."""

    name: str = Field(min_length=1)
    passed: bool
    worst_residual: float = Field(ge=0.0)
    threshold: float = Field(ge=0.0)
    cases: int = Field(ge=0)
    detail: Optional[str] = None

    @classmethod
    def from_domain(cls, check: PropertyCheck) -> "PropertyCheckSchema":
        return cls(
            name=check.name,
            passed=check.passed,
            worst_residual=check.worst_residual,
            threshold=check.threshold,
            cases=check.cases,
            detail=check.detail,
        )

    def to_domain(self) -> PropertyCheck:
        return PropertyCheck(
            name=self.name,
            passed=self.passed,
            worst_residual=self.worst_residual,
            threshold=self.threshold,
            cases=self.cases,
            detail=self.detail,
        )


class SelfTestReportSchema(BaseModel):
    """All checks of a self-test run."""

    seed: int = Field(ge=0)
    full: bool
    fault_injected: bool
    passed: bool
    checks: list[PropertyCheckSchema]

    @model_validator(mode="after")
    def validate_passed(self) -> "SelfTestReportSchema":
        """The overall verdict is the conjunction of the checks."""
        if self.passed != all(c.passed for c in self.checks):
            raise ValueError("passed must equal the conjunction of the checks")
        return self

    @classmethod
    def from_domain(cls, report: SelfTestReport) -> "SelfTestReportSchema":
        return cls(
            seed=report.seed,
            full=report.full,
            fault_injected=report.fault_injected,
            passed=report.passed,
            checks=[PropertyCheckSchema.from_domain(c) for c in report.checks],
        )

    def to_domain(self) -> SelfTestReport:
        return SelfTestReport(
            seed=self.seed,
            full=self.full,
            fault_injected=self.fault_injected,
            checks=tuple(c.to_domain() for c in self.checks),
        )


class SearchReportSchema(BaseModel):
    """Outcome of the unitary-to-involution least-squares search."""

    best_residual: float = Field(ge=0.0)
    median_residual: float = Field(ge=0.0)
    restarts: int = Field(ge=1)
    unitaries: int = Field(ge=1)
    seed: int = Field(ge=0)
    fit_residual: float = Field(default=0.0, ge=0.0)

    @classmethod
    def from_domain(cls, report: SearchReport) -> "SearchReportSchema":
        return cls(
            best_residual=report.best_residual,
            median_residual=report.median_residual,
            restarts=report.restarts,
            unitaries=report.unitaries,
            seed=report.seed,
            fit_residual=report.fit_residual,
        )

    def to_domain(self) -> SearchReport:
        return SearchReport(
            best_residual=self.best_residual,
            median_residual=self.median_residual,
            restarts=self.restarts,
            unitaries=self.unitaries,
            seed=self.seed,
            fit_residual=self.fit_residual,
        )
