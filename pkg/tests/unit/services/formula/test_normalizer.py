"""
Tests for clause normalization.
"""

import pytest

from app.core.exceptions import ClauseNormalizationException
from app.models.formula import Clause, ClauseKind, ConstantClause
from app.services.formula.normalizer import normalize_clause, normalize_formula


def literals(clause):
    return [lit.to_int() for lit in clause.literals]


class TestNormalizeClause:
    """Test normalize_clause."""

    def test_cnf_tautology(self):
        """Test x or not x is constant True."""
        result = normalize_clause(Clause.of(ClauseKind.CNF, [1, -1]), 2)

        assert isinstance(result, ConstantClause)
        assert result.value is True

    def test_cnf_duplicate_literal(self):
        """Test a repeated literal is dropped."""
        result = normalize_clause(Clause.of(ClauseKind.CNF, [2, 1, 2]), 2)

        assert literals(result) == [2, 1]

    @pytest.mark.parametrize(
        "lits,expected",
        [
            ([1, 1, 2], [2]),
            ([1, -1, 2], [-2]),
            ([-1, -2], [1, 2]),
            ([-1, 2, -3], [1, 2, 3]),
        ],
    )
    def test_xor_parity(self, lits, expected):
        """Test duplicates cancel and negations fold into the first literal."""
        result = normalize_clause(Clause.of(ClauseKind.XOR, lits), 3)

        assert literals(result) == expected

    @pytest.mark.parametrize("lits,value", [([1, 1], False), ([1, -1], True)])
    def test_xor_constant(self, lits, value):
        """Test an XOR whose variables all cancel."""
        result = normalize_clause(Clause.of(ClauseKind.XOR, lits), 1)

        assert result == ConstantClause(value=value, kind=ClauseKind.XOR)

    def test_card_le_becomes_card_ge(self):
        """Test at most k of L is at least |L|-k of the negations."""
        clause = Clause.of(ClauseKind.CARD_LE, [1, -2, 3], threshold=1)
        result = normalize_clause(clause, 3)

        assert result.kind == ClauseKind.CARD_GE
        assert result.threshold == 2
        assert literals(result) == [-1, 2, -3]

    @pytest.mark.parametrize(
        "kind,threshold,value",
        [
            (ClauseKind.CARD_GE, 0, True),
            (ClauseKind.CARD_GE, 4, False),
            (ClauseKind.CARD_LE, 3, True),
            (ClauseKind.CARD_LE, -1, False),
        ],
    )
    def test_card_constants(self, kind, threshold, value):
        """Test out-of-range thresholds give constants."""
        clause = Clause.of(kind, [1, 2, 3], threshold=threshold)
        result = normalize_clause(clause, 3)

        assert isinstance(result, ConstantClause)
        assert result.value is value

    def test_single_literal_nae(self):
        """Test NAE over one literal can never hold."""
        result = normalize_clause(Clause.of(ClauseKind.NAE, [1]), 1)

        assert result == ConstantClause(value=False, kind=ClauseKind.NAE)

    def test_weight_survives(self):
        """Test normalization keeps the clause weight."""
        clause = Clause.of(ClauseKind.CARD_LE, [1, 2], threshold=1, weight=2.0)

        assert normalize_clause(clause, 2).weight == 2.0

    def test_idempotent(self, mixed_formula):
        """Test normalizing twice changes nothing."""
        once = normalize_formula(mixed_formula)
        twice = [normalize_clause(c, mixed_formula.n) for c in once]

        assert once == twice

    @pytest.mark.parametrize(
        "clause",
        [
            Clause.of(ClauseKind.CARD_GE, [1, 1], threshold=1),
            Clause.of(ClauseKind.NAE, [1, -1, 2]),
            Clause.of(ClauseKind.CNF, [5]),
        ],
    )
    def test_rejected(self, clause):
        """Test repeated CARD/NAE variables and out-of-range variables."""
        with pytest.raises(ClauseNormalizationException):
            normalize_clause(clause, 2)
