"""
Tests for saddle escape and the second-order local-minimum test.
"""

import numpy as np
import pytest

from app.models.formula import Clause, ClauseKind, Formula
from app.schemas.solver import DescentConfig, LocalMinFlag
from app.services.formula.parser import parse_formula
from app.services.fourier.objective import ObjectiveContext
from app.services.optimizer.saddle import (
    LocalPolynomial,
    dec_inner_saddle,
    is_zero,
    neg_direction_saddle,
    shrinking_move,
    use_hessian,
)


def context(text):
    return ObjectiveContext.build(parse_formula(text))


@pytest.fixture
def product_of_four():
    """F = x1 x2 x3 x4."""
    return context("p hybrid 4 1\nx 1 2 3 4 0\n")


class TestLocalPolynomial:
    """Test LocalPolynomial closures."""

    def test_shift_and_offset(self, product_of_four):
        """Test y is added on the free coordinates and the offset subtracted."""
        anchor = np.array([0.5, 1.0, 0.0, 0.0])
        f = LocalPolynomial(product_of_four, anchor, (2, 3), offset=0.25)

        assert f.dims == 2
        assert float(f(np.array([0.4, -0.5]))) == pytest.approx(0.5 * 0.4 * -0.5 - 0.25)

    def test_batched_call(self, product_of_four):
        """Test a (r, dims) batch."""
        f = LocalPolynomial(product_of_four, np.ones(4), (0,))

        np.testing.assert_allclose(f(np.array([[0.0], [-1.0], [-2.0]])), [1, 0, -1])

    def test_fix_first_and_minus(self, product_of_four):
        """Test pinning the leading free coordinate."""
        f = LocalPolynomial(product_of_four, np.zeros(4), (0, 1, 2, 3))
        g = f.fix_first(1.0).fix_first(1.0).minus(0.5)

        assert g.free == (2, 3)
        assert float(g(np.array([1.0, 1.0]))) == pytest.approx(0.5)
        np.testing.assert_array_equal(f.anchor, np.zeros(4))


class TestIsZero:
    """Test the probabilistic zero test."""

    def test_identically_zero(self, product_of_four, rng):
        """Test a polynomial killed by a zero anchor coordinate."""
        f = LocalPolynomial(product_of_four, np.zeros(4), (1, 2, 3))

        assert is_zero(f, rng, 1e-9)

    def test_non_zero(self, product_of_four, rng):
        """Test a genuine monomial."""
        f = LocalPolynomial(product_of_four, np.zeros(4), (0, 1, 2, 3))

        assert not is_zero(f, rng, 1e-9)


class TestNegDirectionSaddle:
    """Test negative directions at degenerate saddles."""

    @pytest.mark.parametrize("c", [0.5, -0.3])
    def test_product_of_four(self, product_of_four, rng, c):
        """Test v = (0, 1, 1, -sign c) at (c, 0, 0, 0)."""
        x = np.array([c, 0.0, 0.0, 0.0])
        value = float(product_of_four.value(x))
        f = LocalPolynomial(product_of_four, x, (0, 1, 2, 3), value)
        v = neg_direction_saddle(f, rng, 1e-9)

        np.testing.assert_array_equal(v, [0.0, 1.0, 1.0, -np.sign(c)])
        for delta in (1e-1, 1e-2, 1e-3):
            assert float(f(delta * v)) < 0

    def test_linear_term(self, rng):
        """Test a non-vanishing first coefficient decides at once."""
        ctx = context("p hybrid 2 1\nx 1 2 0\n")
        f = LocalPolynomial(ctx, np.array([0.0, 0.4]), (0, 1))

        np.testing.assert_array_equal(neg_direction_saddle(f, rng, 1e-9), [-1.0, 0.0])

    def test_zero_polynomial(self, rng):
        """Test None when no direction decreases."""
        ctx = context("p hybrid 2 1\nx 1 2 0\n")
        f = LocalPolynomial(ctx, np.zeros(2), (1,))

        assert neg_direction_saddle(f, rng, 1e-9) is None


class TestDecInnerSaddle:
    """Test the inner-saddle escape move."""

    def test_moves_downhill(self, product_of_four, rng):
        """Test the escape strictly decreases F."""
        x = np.array([0.5, 0.0, 0.0, 0.0])
        moved, restart = dec_inner_saddle(
            product_of_four, x, 0.25, DescentConfig(), rng
        )

        assert restart is False
        assert np.all(np.abs(moved) <= 1.0)
        assert float(product_of_four.value(moved)) < 0.0

    def test_all_coordinates_pinned(self, product_of_four, rng):
        """Test a vertex asks for a restart."""
        x = np.ones(4)
        moved, restart = dec_inner_saddle(
            product_of_four, x, 0.25, DescentConfig(), rng
        )

        assert restart is True
        assert moved is x


class TestShrinkingMove:
    """Test shrinking_move."""

    def test_halves_into_the_box(self):
        """Test the step shrinks until the move stays inside the box."""
        ctx = context("p hybrid 1 1\n1 0\n")
        moved = shrinking_move(ctx, np.array([-0.9]), np.array([-1.0]), 0.5, 5)

        np.testing.assert_allclose(moved, [-0.9625])

    def test_no_decrease(self):
        """Test None when the direction goes uphill."""
        ctx = context("p hybrid 1 1\n1 0\n")

        assert shrinking_move(ctx, np.array([0.0]), np.array([1.0]), 0.5, 5) is None


class TestUseHessian:
    """Test the second-order test at feasible critical points."""

    def test_certified_local_minimum(self):
        """Test F = x1 x2 - x1 - x2 at (1, 1)."""
        ctx = context("p hybrid 2 3\nx 1 2 0\nx -1 0\nx -2 0\n")
        x = np.ones(2)
        point, flag = use_hessian(ctx, x, DescentConfig())

        assert flag == LocalMinFlag.TRUE
        np.testing.assert_array_equal(point, x)

    def test_unused_interior_coordinate(self):
        """Test F = x1 at (-1, 0): x2 is free and F ignores it."""
        ctx = context("p hybrid 2 1\n1 0\n")
        x = np.array([-1.0, 0.0])
        point, flag = use_hessian(ctx, x, DescentConfig())

        assert flag == LocalMinFlag.TRUE
        np.testing.assert_array_equal(point, x)

    def test_pair_of_pinned_coordinates(self):
        """Test F = -x1 x2 + x1 + x2 at (1, 1) moves along (-1, -1)."""
        ctx = context("p hybrid 2 3\nx -1 2 0\nx 1 0\nx 2 0\n")
        x = np.ones(2)
        point, flag = use_hessian(ctx, x, DescentConfig())

        assert flag == LocalMinFlag.FALSE
        assert point[0] == pytest.approx(point[1])
        assert point[0] < 1.0
        assert float(ctx.value(point)) < float(ctx.value(x))

    def test_pinned_coupled_to_free(self):
        """Test F = x1 x2 - x2 at (1, 0) moves along (-1, 1)."""
        ctx = context("p hybrid 2 2\nx 1 2 0\nx -2 0\n")
        x = np.array([1.0, 0.0])
        point, flag = use_hessian(ctx, x, DescentConfig())

        assert flag == LocalMinFlag.FALSE
        np.testing.assert_allclose(point, [0.75, 0.25])
        assert float(ctx.value(point)) < 0.0

    def test_degenerate_corner(self):
        """Test F = x1 x2 x3 at (1, 0, 0) is left undecided."""
        ctx = context("p hybrid 3 1\nx 1 2 3 0\n")
        x = np.array([1.0, 0.0, 0.0])
        point, flag = use_hessian(ctx, x, DescentConfig())

        assert flag == LocalMinFlag.UNKNOWN
        np.testing.assert_array_equal(point, x)


def pinned_pair_formula(n, i, j, si, sj):
    """F = -si sj x_i x_j + si x_i + sj x_j; critical at x_i = si, x_j = sj."""
    return Formula(
        n=n,
        clauses=(
            Clause.of(ClauseKind.XOR, [-si * i, sj * j]),
            Clause.of(ClauseKind.XOR, [si * i]),
            Clause.of(ClauseKind.XOR, [sj * j]),
        ),
    )


def coupled_formula(n, i, j, si):
    """F = si x_i x_j - x_j; critical at x_i = si, x_j = 0."""
    return Formula(
        n=n,
        clauses=(
            Clause.of(ClauseKind.XOR, [si * i, j]),
            Clause.of(ClauseKind.XOR, [-j]),
        ),
    )


class TestEscapeSoundness:
    """Test every escape move lands in the box strictly lower."""

    def test_dec_inner_saddle_on_random_points(self, random_formula):
        """Test moves on random formulas at partly pinned points."""
        rng = np.random.default_rng(17)
        cfg = DescentConfig()
        moves = 0
        for _ in range(100):
            n = int(rng.integers(3, 7))
            formula = random_formula(rng, n, int(rng.integers(1, 7)))
            ctx = ObjectiveContext.build(formula)
            x = rng.uniform(-0.9, 0.9, size=n)
            walls = rng.random(n) < 0.4
            walls[int(rng.integers(n))] = False
            x[walls] = rng.choice([-1.0, 1.0], size=int(walls.sum()))
            moved, restart = dec_inner_saddle(ctx, x, 0.25, cfg, rng)
            if restart:
                continue
            moves += 1

            assert np.all(np.abs(moved) <= 1.0)
            assert float(ctx.value(moved)) < float(ctx.value(x))

        assert moves >= 20

    @pytest.mark.parametrize("family", ["pinned_pair", "coupled"])
    def test_use_hessian_moves(self, family):
        """Test FALSE-flag moves at randomly placed and signed saddles."""
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            i, j = (int(v) + 1 for v in rng.choice(n, size=2, replace=False))
            si, sj = (int(s) for s in rng.choice([-1, 1], size=2))
            x = rng.uniform(-0.5, 0.5, size=n)
            if family == "pinned_pair":
                formula = pinned_pair_formula(n, i, j, si, sj)
                x[[i - 1, j - 1]] = si, sj
            else:
                formula = coupled_formula(n, i, j, si)
                x[[i - 1, j - 1]] = si, 0.0
            ctx = ObjectiveContext.build(formula)
            point, flag = use_hessian(ctx, x, DescentConfig())

            assert flag == LocalMinFlag.FALSE
            assert np.all(np.abs(point) <= 1.0)
            assert float(ctx.value(point)) < float(ctx.value(x))
