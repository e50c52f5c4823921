from app.services.formula.normalizer import normalize_clause, normalize_formula
from app.services.formula.parser import (
    format_model,
    parse_formula,
    parse_model,
    serialize_formula,
)
from app.services.formula.semantics import clause_truth

__all__ = [
    "clause_truth",
    "format_model",
    "normalize_clause",
    "normalize_formula",
    "parse_formula",
    "parse_model",
    "serialize_formula",
]
