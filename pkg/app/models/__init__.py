"""
Models package initialization.
"""

from app.models.formula import (
    FALSE,
    TRUE,
    Assignment,
    BooleanAssignment,
    Clause,
    ClauseKind,
    ConstantClause,
    Formula,
    Literal,
    NormalizedClause,
    as_boolean_assignment,
)

__all__ = [
    "FALSE",
    "TRUE",
    "Assignment",
    "BooleanAssignment",
    "Clause",
    "ClauseKind",
    "ConstantClause",
    "Formula",
    "Literal",
    "NormalizedClause",
    "as_boolean_assignment",
]
