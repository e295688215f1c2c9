"""Self-test results."""

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of one invariant check."""

    name: str
    passed: bool
    worst_residual: float
    threshold: float
    cases: int
    detail: Optional[str] = None

    @classmethod
    def measure(
        cls,
        name: str,
        worst_residual: float,
        threshold: float,
        cases: int,
        detail: Optional[str] = None,
    ) -> "PropertyCheck":
        """Pass iff the worst residual stays within threshold (3 significant digits kept)."""
        rounded = float(f"{worst_residual:.3e}")
        return cls(
            name=name,
            passed=bool(worst_residual <= threshold),
            worst_residual=rounded,
            threshold=threshold,
            cases=cases,
            detail=detail,
        )

    @classmethod
    def verdict(cls, name: str, passed: bool, cases: int, detail: Optional[str] = None) -> "PropertyCheck":
        """Boolean property with no residual."""
        return cls(
            name=name, passed=bool(passed), worst_residual=0.0, threshold=0.0, cases=cases, detail=detail
        )


@dataclass(frozen=True)
class SelfTestReport:
    """All property checks of one self-test run."""

    seed: int
    full: bool
    fault_injected: bool
    checks: tuple[PropertyCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]
