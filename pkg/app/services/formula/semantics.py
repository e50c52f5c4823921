"""
Truth-table semantics of hybrid clauses, vectorized over many assignments.
"""

import numpy as np

from app.models.formula import TRUE, ClauseKind, ConstantClause, NormalizedClause


def clause_truth(clause: NormalizedClause, values: np.ndarray) -> np.ndarray:
    """
    Evaluate a clause on Boolean assignments.

    Args:
        clause: raw or normalized clause
        values: (r, n) or (n,) array of +-1 entries, -1 meaning True

    Returns:
        Boolean array of shape (r,) (or a 0-d array for a single assignment)
    """
    values = np.asarray(values)
    single = values.ndim == 1
    rows = values[None, :] if single else values

    if isinstance(clause, ConstantClause):
        result = np.full(rows.shape[0], clause.value, dtype=bool)
        return result[0] if single else result

    columns = np.fromiter((lit.var - 1 for lit in clause.literals), dtype=np.intp)
    negated = np.fromiter((lit.negated for lit in clause.literals), dtype=bool)
    literal_true = (rows[:, columns] == TRUE) != negated
    true_count = literal_true.sum(axis=1)

    if clause.kind == ClauseKind.CNF:
        result = true_count >= 1
    elif clause.kind == ClauseKind.XOR:
        result = true_count % 2 == 1
    elif clause.kind == ClauseKind.CARD_GE:
        result = true_count >= clause.threshold
    elif clause.kind == ClauseKind.CARD_LE:
        result = true_count <= clause.threshold
    else:
        result = (true_count > 0) & (true_count < clause.size)

    return result[0] if single else result
