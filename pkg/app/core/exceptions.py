"""
Custom exception handling and error management.

Provides structured exceptions with stable error codes, process exit codes
and detail dictionaries that are logged as structured fields.
"""

from typing import Any, Dict, Optional

from pydantic import ValidationError

from app.core.logging import get_logger

logger = get_logger(__name__)

EXIT_ERROR = 1


class BaseCustomException(Exception):
    """Base class for custom application exceptions."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_ERROR,
        error_code: str = None,
        details: Dict[str, Any] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Structured view used for logging and CLI error reports."""
        return {
            "code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ValidationException(BaseCustomException):
    """Validation error exception."""

    def __init__(self, message: str, field: str = None, details: Dict = None):
        super().__init__(
            message=message,
            error_code="VALIDATION_ERROR",
            details={"field": field, **(details or {})},
        )

    @classmethod
    def from_pydantic(cls, exc: ValidationError) -> "ValidationException":
        errors = exc.errors()
        field = str(errors[0]["loc"][-1]) if errors and errors[0]["loc"] else None
        return cls(
            message=errors[0]["msg"] if errors else str(exc),
            field=field,
            details={
                "validation_errors": [
                    {
                        "field": e["loc"][-1] if e["loc"] else "unknown",
                        "message": e["msg"],
                    }
                    for e in errors
                ]
            },
        )


class FormulaParseException(BaseCustomException):
    """Syntax or range error in a formula document."""

    def __init__(self, message: str, line: Optional[int] = None, text: str = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(
            message=f"{prefix}{message}",
            error_code="FORMULA_PARSE_ERROR",
            details={"line": line, "text": text},
        )
        self.line = line


class ClauseNormalizationException(BaseCustomException):
    """Clause whose semantics cannot be normalized."""

    def __init__(self, message: str, kind: str = None, variable: int = None):
        super().__init__(
            message=message,
            error_code="CLAUSE_NORMALIZATION_ERROR",
            details={"kind": kind, "variable": variable},
        )


class ClauseTooLargeException(BaseCustomException):
    """Clause exceeds the per-clause size contract."""

    def __init__(self, size: int, limit: int):
        super().__init__(
            message=f"Clause of size {size} exceeds the limit of {limit} literals",
            error_code="CLAUSE_TOO_LARGE",
            details={"size": size, "limit": limit},
        )


class WeightRuleException(BaseCustomException):
    """Weight rule cannot be applied to the formula."""

    def __init__(self, message: str, rule: str = None, clause_index: int = None):
        super().__init__(
            message=message,
            error_code="WEIGHT_RULE_ERROR",
            details={"rule": rule, "clause_index": clause_index},
        )


class InfeasiblePointException(BaseCustomException):
    """Value-preserving rounding requested at an infeasible point."""

    def __init__(self, message: str, fractional: int = None):
        super().__init__(
            message=message,
            error_code="INFEASIBLE_POINT",
            details={"fractional_coordinates": fractional},
        )


class OracleLimitException(BaseCustomException):
    """Brute-force oracle asked to exceed its size cap."""

    def __init__(self, operation: str, size: int, limit: int):
        super().__init__(
            message=f"{operation} supports at most {limit} variables, got {size}",
            error_code="ORACLE_LIMIT",
            details={"operation": operation, "size": size, "limit": limit},
        )


class GeneratorException(BaseCustomException):
    """Benchmark generator failure."""

    def __init__(self, message: str, family: str = None, details: Dict = None):
        super().__init__(
            message=message,
            error_code="GENERATOR_ERROR",
            details={"family": family, **(details or {})},
        )


class ModelMismatchException(BaseCustomException):
    """Model does not fit the formula it is checked against."""

    def __init__(self, message: str, expected: int = None, found: int = None):
        super().__init__(
            message=message,
            error_code="MODEL_MISMATCH",
            details={"expected_variables": expected, "found_variables": found},
        )


def log_exception(exc: Exception, event: str = "Operation failed") -> None:
    """Log an exception with its structured details."""
    if isinstance(exc, BaseCustomException):
        logger.error(
            event,
            error_code=exc.error_code,
            error=exc.message,
            details=exc.details,
        )
    else:
        logger.error(
            event,
            error=str(exc),
            error_type=type(exc).__name__,
            exc_info=True,
        )
