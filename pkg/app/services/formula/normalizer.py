"""
Clause normalization: duplicate variables, counting complements and constants.
"""

from typing import Dict, List

from app.core.exceptions import ClauseNormalizationException
from app.models.formula import (
    Clause,
    ClauseKind,
    ConstantClause,
    Formula,
    Literal,
    NormalizedClause,
)


def normalize_clause(clause: NormalizedClause, n: int) -> NormalizedClause:
    """
    Rewrite a clause into the canonical form the spectra are computed for.

    CNF and XOR duplicates are resolved by logic identities, CARD_LE is
    rewritten as CARD_GE over the negated literals, and clauses with a fixed
    truth value become ConstantClause. Normalizing a normalized clause returns
    it unchanged.

    Raises:
        ClauseNormalizationException: variable out of range, or a variable
            repeated inside a CARD/NAE clause.
    """
    if isinstance(clause, ConstantClause):
        return clause

    for lit in clause.literals:
        if not 1 <= lit.var <= n:
            raise ClauseNormalizationException(
                f"Variable {lit.var} outside [1, {n}]",
                kind=clause.kind.value,
                variable=lit.var,
            )

    if clause.kind == ClauseKind.CNF:
        return _normalize_cnf(clause)
    if clause.kind == ClauseKind.XOR:
        return _normalize_xor(clause)

    _reject_duplicates(clause)

    if clause.kind == ClauseKind.NAE:
        if clause.size == 1:
            return ConstantClause(value=False, kind=clause.kind, weight=clause.weight)
        return clause

    literals = clause.literals
    threshold = clause.threshold
    if clause.kind == ClauseKind.CARD_LE:
        # at most k True <=> at least |L|-k True among the negations
        literals = tuple(~lit for lit in literals)
        threshold = len(literals) - threshold

    if threshold <= 0:
        return ConstantClause(value=True, kind=clause.kind, weight=clause.weight)
    if threshold > len(literals):
        return ConstantClause(value=False, kind=clause.kind, weight=clause.weight)

    if clause.kind == ClauseKind.CARD_GE:
        return clause
    return Clause(
        kind=ClauseKind.CARD_GE,
        literals=literals,
        threshold=threshold,
        weight=clause.weight,
    )


def normalize_formula(formula: Formula) -> List[NormalizedClause]:
    """Normalize every clause of a formula, keeping file order."""
    return [normalize_clause(clause, formula.n) for clause in formula.clauses]


def _reject_duplicates(clause: Clause) -> None:
    seen = set()
    for lit in clause.literals:
        if lit.var in seen:
            raise ClauseNormalizationException(
                f"Variable {lit.var} repeated in {clause.kind.value} clause",
                kind=clause.kind.value,
                variable=lit.var,
            )
        seen.add(lit.var)


def _normalize_cnf(clause: Clause) -> NormalizedClause:
    polarity: Dict[int, bool] = {}
    literals: List[Literal] = []
    for lit in clause.literals:
        if lit.var in polarity:
            if polarity[lit.var] != lit.negated:
                return ConstantClause(
                    value=True, kind=clause.kind, weight=clause.weight
                )
            continue
        polarity[lit.var] = lit.negated
        literals.append(lit)

    if len(literals) == clause.size:
        return clause
    return Clause(kind=ClauseKind.CNF, literals=tuple(literals), weight=clause.weight)


def _normalize_xor(clause: Clause) -> NormalizedClause:
    # each negation flips the overall parity; a pair of equal variables cancels
    parity = sum(lit.negated for lit in clause.literals) % 2
    counts: Dict[int, int] = {}
    for lit in clause.literals:
        counts[lit.var] = counts.get(lit.var, 0) + 1
    remaining = [var for var, count in counts.items() if count % 2 == 1]

    if not remaining:
        return ConstantClause(value=parity == 1, kind=clause.kind, weight=clause.weight)

    literals = tuple(
        Literal(var=var, negated=(i == 0 and parity == 1))
        for i, var in enumerate(remaining)
    )
    if literals == clause.literals:
        return clause
    return Clause(kind=ClauseKind.XOR, literals=literals, weight=clause.weight)
