"""Custom exceptions for the library and CLI."""

from typing import Any, Optional

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERDICT = 2


class PreserverLabError(Exception):
    """Base exception for all library exceptions."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_INPUT_ERROR,
        error_code: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        super().__init__(self.message)


# ============================================================================
# Input errors
# ============================================================================


class InvalidInput(PreserverLabError):
    """Malformed input document."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="INVALID_INPUT", details=details)


class NotHermitian(PreserverLabError):
    """Matrix is not hermitian within tol_sym."""

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(
            message=f"Matrix is not hermitian (deviation {deviation:.3e} > {tolerance:.3e})",
            error_code="NOT_HERMITIAN",
            details={"deviation": deviation, "tolerance": tolerance},
        )


class NotTraceless(PreserverLabError):
    """Matrix has nonzero trace where a traceless one is required."""

    def __init__(self, trace: float, tolerance: float):
        super().__init__(
            message=f"Matrix is not traceless (|tr| = {trace:.3e} > {tolerance:.3e})",
            error_code="NOT_TRACELESS",
            details={"trace": trace, "tolerance": tolerance},
        )


class DimensionMismatch(PreserverLabError):
    """Sizes of the operands do not agree."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="DIMENSION_MISMATCH", details=details)


class AmbientMismatch(PreserverLabError):
    """Subspaces live in different ambient spaces."""

    def __init__(self, left: int, right: int):
        super().__init__(
            message=f"Subspaces have different ambient dimensions ({left} != {right})",
            error_code="AMBIENT_MISMATCH",
            details={"left": left, "right": right},
        )


class SizeMismatch(PreserverLabError):
    """Projections that must share an ambient size do not."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="SIZE_MISMATCH", details=details)


class BadParameter(PreserverLabError):
    """A scalar parameter is outside its admissible range."""

    def __init__(self, name: str, value: Any, expected: str):
        super().__init__(
            message=f"Parameter '{name}'={value} is invalid: expected {expected}",
            error_code="BAD_PARAMETER",
            details={"name": name, "value": str(value), "expected": expected},
        )


class NotIsometry(PreserverLabError):
    """Matrix does not have orthonormal columns."""

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(
            message=f"Matrix is not an isometry (|U*U - I| = {deviation:.3e})",
            error_code="NOT_ISOMETRY",
            details={"deviation": deviation, "tolerance": tolerance},
        )


class NotProjection(PreserverLabError):
    """Matrix is not an orthogonal projection."""

    def __init__(self, message: str = "Matrix is not a projection"):
        super().__init__(message=message, error_code="NOT_PROJECTION")


class NotInvolution(PreserverLabError):
    """Matrix is not a trace-zero hermitian unitary."""

    def __init__(self, message: str = "Matrix is not a traceless hermitian involution"):
        super().__init__(message=message, error_code="NOT_INVOLUTION")


class NotHalfRankProjection(PreserverLabError):
    """Matrix is not a rank-k projection in dimension 2k."""

    def __init__(self, message: str = "Matrix is not a rank-k projection of size 2k"):
        super().__init__(message=message, error_code="NOT_HALF_RANK_PROJECTION")


class NotUnitaryPair(PreserverLabError):
    """x + y and x - y are not both unitary."""

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(
            message=f"x + y and x - y are not both unitary (deviation {deviation:.3e})",
            error_code="NOT_UNITARY_PAIR",
            details={"deviation": deviation, "tolerance": tolerance},
        )


# ============================================================================
# Numerical failures
# ============================================================================


class NoConvergence(PreserverLabError):
    """Jacobi iteration exceeded its sweep cap."""

    def __init__(self, routine: str, sweeps: int, off_norm: float):
        super().__init__(
            message=f"{routine} did not converge in {sweeps} sweeps (off-norm {off_norm:.3e})",
            error_code="NO_CONVERGENCE",
            details={"routine": routine, "sweeps": sweeps, "off_norm": off_norm},
        )


class BlockExtractionFailure(PreserverLabError):
    """Recovered block structure does not reproduce the input map."""

    def __init__(self, residual: float, tolerance: float, stage: str = "reassembly"):
        super().__init__(
            message=f"Block extraction failed at {stage} (residual {residual:.3e} > {tolerance:.3e})",
            error_code="BLOCK_EXTRACTION_FAILURE",
            details={"residual": residual, "tolerance": tolerance, "stage": stage},
        )


# ============================================================================
# Verdicts
# ============================================================================


class EmptySet(PreserverLabError):
    """The requested blend set has no members."""

    def __init__(self, gap: float, bound: float):
        super().__init__(
            message=f"Blend set is empty (gap {gap:.6f} > bound {bound:.6f})",
            exit_code=EXIT_VERDICT,
            error_code="EMPTY_SET",
            details={"gap": gap, "bound": bound},
        )


class TauNotAdmissible(PreserverLabError):
    """A sampled involution was not mapped to a unitary."""

    def __init__(self, deviation: float, tolerance: float, sample: int):
        super().__init__(
            message=f"Map sends involution #{sample} to a non-unitary (deviation {deviation:.3e})",
            exit_code=EXIT_VERDICT,
            error_code="TAU_NOT_ADMISSIBLE",
            details={"deviation": deviation, "tolerance": tolerance, "sample": sample},
        )


class RankNotConstant(PreserverLabError):
    """Images of rank-k projections have different ranks."""

    def __init__(self, ranks: list[int]):
        super().__init__(
            message=f"Image ranks are not constant: {sorted(set(ranks))}",
            exit_code=EXIT_VERDICT,
            error_code="RANK_NOT_CONSTANT",
            details={"ranks": sorted(set(ranks))},
        )


class NotAPreserver(PreserverLabError):
    """Map does not preserve the distinguished set."""

    def __init__(self, reason: str, details: Optional[dict[str, Any]] = None):
        super().__init__(
            message=f"Map is not a preserver: {reason}",
            exit_code=EXIT_VERDICT,
            error_code="NOT_A_PRESERVER",
            details=details or {"reason": reason},
        )
