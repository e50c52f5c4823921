"""
Tests for closed-form clause spectra.
"""

from math import comb
from unittest.mock import patch

import numpy as np
import pytest

from app.core.config import settings
from app.core.exceptions import ClauseTooLargeException
from app.models.formula import Clause, ClauseKind, ConstantClause
from app.services.formula.normalizer import normalize_clause
from app.services.formula.semantics import clause_truth
from app.services.fourier.spectrum import (
    card_ge_kappa,
    clause_kappa,
    eval_clause,
    nae_kappa,
    spectrum,
    theta_coefficients,
)
from app.services.oracle import boolean_points, brute_force_spectrum
from app.utils.cache.manager import get_spectrum_cache


def mixed_signs(k):
    return [(j + 1) * (-1 if j % 3 == 1 else 1) for j in range(k)]


def clauses_up_to(max_size):
    for k in range(1, max_size + 1):
        lits = mixed_signs(k)
        yield Clause.of(ClauseKind.CNF, lits)
        yield Clause.of(ClauseKind.XOR, lits)
        if k >= 2:
            yield Clause.of(ClauseKind.NAE, lits)
        for t in range(1, k + 1):
            yield Clause.of(ClauseKind.CARD_GE, lits, threshold=t)


class TestClosedForms:
    """Test the coefficient formulas on known expansions."""

    def test_or_of_two(self):
        """Test x1 or x2 = -1/2 + x1/2 + x2/2 + x1 x2 / 2."""
        s = spectrum(Clause.of(ClauseKind.CNF, [1, 2]))

        np.testing.assert_allclose(s.kappa, [-0.5, 0.5, 0.5])
        np.testing.assert_array_equal(s.signs, [1.0, 1.0])

    def test_xor_is_product(self):
        """Test XOR of three is x1 x2 x3."""
        s = spectrum(Clause.of(ClauseKind.XOR, [1, 2, 3]))

        np.testing.assert_array_equal(s.kappa, [0, 0, 0, 1])

    def test_nae_of_three(self):
        """Test NAE = -1/2 + (x1 x2 + x2 x3 + x1 x3) / 2."""
        np.testing.assert_allclose(nae_kappa(3), [-0.5, 0.0, 0.5, 0.0])

    def test_and_of_two(self):
        """Test at least 2 of 2 = 1/2 + x1/2 + x2/2 - x1 x2 / 2."""
        np.testing.assert_allclose(card_ge_kappa(2, 2), [0.5, 0.5, -0.5])

    def test_theta_coefficients(self):
        """Test (1 + t)^2 (1 - t) = 1 + t - t^2 - t^3."""
        assert theta_coefficients(2, 1) == [1, 1, -1, -1]

    def test_negation_moves_into_signs(self):
        """Test negated literals only change the sign vector."""
        s = spectrum(Clause.of(ClauseKind.CNF, [1, -3]))

        np.testing.assert_array_equal(s.signs, [1.0, -1.0])
        assert s.variables == (1, 3)
        np.testing.assert_array_equal(s.index, [0, 2])

    @pytest.mark.parametrize("size,threshold", [(30, 1), (30, 15), (45, 44), (60, 7)])
    def test_parseval(self, size, threshold):
        """Test sum_s C(k, s) kappa_s^2 = 1 for a +-1 valued clause."""
        kappa = card_ge_kappa(size, threshold)
        total = sum(comb(size, s) * kappa[s] ** 2 for s in range(size + 1))

        assert total == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("size,threshold", [(40, 1), (40, 20), (48, 31)])
    def test_log_space_matches_exact(self, size, threshold):
        """Test the log-space path against exact rationals."""
        exact = card_ge_kappa(size, threshold)
        with patch.object(settings, "EXACT_SPECTRUM_LIMIT", 10):
            approx = card_ge_kappa(size, threshold)

        np.testing.assert_allclose(approx, exact, rtol=1e-9, atol=1e-300)

    def test_long_clause(self):
        """Test a clause well past the exact limit stays finite."""
        kappa = card_ge_kappa(500, 250)

        assert np.all(np.isfinite(kappa))
        assert abs(kappa[0]) < 1.0


class TestAgainstBruteForce:
    """Test closed forms against definition-based spectra."""

    @pytest.mark.parametrize("clause", list(clauses_up_to(6)), ids=repr)
    def test_every_coefficient(self, clause):
        """Test coefficient on S equals kappa_|S| times the product of signs."""
        s = spectrum(clause)
        full = brute_force_spectrum(clause)
        sign = dict(zip(s.variables, s.signs))

        for subset, value in full.coefficients.items():
            expected = s.kappa[len(subset)] * np.prod([sign[v] for v in subset])
            assert value == pytest.approx(expected, abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("size", range(7, 13))
    def test_every_kind_up_to_twelve(self, size):
        """Test every kind and threshold of one size against the transform."""
        clauses = [c for c in clauses_up_to(size) if c.size == size]
        clauses.append(Clause.of(ClauseKind.CARD_LE, mixed_signs(size), threshold=3))

        for clause in clauses:
            s = spectrum(normalize_clause(clause, size))
            full = brute_force_spectrum(clause)
            sign = dict(zip(s.variables, s.signs))
            for subset, value in full.coefficients.items():
                expected = s.kappa[len(subset)] * np.prod([sign[v] for v in subset])
                assert value == pytest.approx(expected, abs=1e-9), repr(clause)

    def test_coefficients_equal_within_size(self):
        """Test a positive clause is symmetric: one value per subset size."""
        full = brute_force_spectrum(
            Clause.of(ClauseKind.CARD_GE, [1, 2, 3, 4, 5], threshold=3)
        )

        for values in full.by_size().values():
            assert np.ptp(values) < 1e-12

    @pytest.mark.parametrize("clause", list(clauses_up_to(4)), ids=repr)
    def test_sign_at_boolean_points(self, clause):
        """Test FE is -1 exactly where the clause holds and +1 elsewhere."""
        s = spectrum(clause)
        n = max(clause.variables)
        points = boolean_points(n)
        values = np.array([eval_clause(s, p) for p in points])
        expected = np.where(clause_truth(clause, points), -1.0, 1.0)

        np.testing.assert_allclose(values, expected, atol=1e-12)


class TestSpectrumErrors:
    """Test spectrum preconditions."""

    def test_constant_clause(self):
        """Test constants have no spectrum."""
        with pytest.raises(ValueError):
            spectrum(ConstantClause(value=True, kind=ClauseKind.CNF))

    def test_card_le_must_be_normalized(self):
        """Test CARD_LE is rejected until normalized."""
        clause = Clause.of(ClauseKind.CARD_LE, [1, 2], threshold=1)

        with pytest.raises(ValueError):
            spectrum(clause)
        assert spectrum(normalize_clause(clause, 2)).kind == ClauseKind.CARD_GE

    @patch.object(settings, "MAX_CLAUSE_SIZE", 3)
    def test_too_large(self):
        """Test the clause length cap."""
        with pytest.raises(ClauseTooLargeException):
            spectrum(Clause.of(ClauseKind.XOR, [1, 2, 3, 4]))

    def test_weight(self):
        """Test explicit weight overrides the clause weight."""
        clause = Clause.of(ClauseKind.CNF, [1], weight=2.0)

        assert spectrum(clause).weight == 2.0
        assert spectrum(clause, weight=5.0).weight == 5.0


class TestKappaCache:
    """Test spectra are shared through the cache."""

    def test_cnf_shares_card_ge_entry(self):
        """Test CNF of k is the at-least-1 entry of k."""
        first = clause_kappa(ClauseKind.CNF, 4)
        second = clause_kappa(ClauseKind.CARD_GE, 4, 1)

        assert first is second
        assert get_spectrum_cache().hits == 1

    def test_cached_arrays_are_read_only(self):
        """Test a shared vector cannot be mutated."""
        kappa = clause_kappa(ClauseKind.XOR, 3)

        with pytest.raises(ValueError):
            kappa[0] = 1.0
