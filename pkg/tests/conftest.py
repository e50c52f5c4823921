"""
Pytest configuration and fixtures.
"""

import numpy as np
import pytest

from app.models.formula import Clause, ClauseKind, Formula
from app.services.formula.parser import parse_formula
from app.utils.cache.manager import get_spectrum_cache


def make_formula(n, *clauses):
    """Formula from (kind, literals[, threshold]) tuples."""
    built = []
    for spec in clauses:
        kind, literals, *rest = spec
        built.append(Clause.of(kind, literals, threshold=rest[0] if rest else None))
    return Formula(n=n, clauses=tuple(built))


@pytest.fixture(autouse=True)
def clear_spectrum_cache():
    """Every test starts from an empty spectrum cache."""
    get_spectrum_cache().clear()
    yield


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(12345)


@pytest.fixture
def or_formula():
    """The single clause x1 or x2."""
    return make_formula(2, (ClauseKind.CNF, [1, 2]))


@pytest.fixture
def mixed_formula():
    """One clause of every kind over five variables; x = (T, F, T, F, F) works."""
    return parse_formula(
        "c mixed\n"
        "p hybrid 5 5\n"
        "1 -2 0\n"
        "x 1 2 4 0\n"
        "d >= 2 1 2 3 0\n"
        "d <= 1 4 5 2 0\n"
        "n 2 3 5 0\n"
    )


@pytest.fixture
def contradiction_formula():
    """x1 and not x1."""
    return parse_formula("p cnf 1 2\n1 0\n-1 0\n")


@pytest.fixture
def formula_file(tmp_path):
    """Write formula text to a temporary file and return its path."""

    def _write(text, name="formula.hyb"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


@pytest.fixture
def random_formula():
    """Build random unit-weight formulas mixing every clause kind."""
    kinds = list(ClauseKind)

    def _build(rng, n, m, max_size=5):
        clauses = []
        for _ in range(m):
            kind = kinds[rng.integers(len(kinds))]
            low = 2 if kind == ClauseKind.NAE else 1
            size = int(rng.integers(low, min(n, max_size) + 1))
            variables = rng.choice(n, size=size, replace=False) + 1
            signs = rng.choice([-1, 1], size=size)
            threshold = (
                int(rng.integers(1, size + 1)) if kind.is_cardinality else None
            )
            clauses.append(
                Clause.of(kind, (variables * signs).tolist(), threshold=threshold)
            )
        return Formula(n=n, clauses=tuple(clauses))

    return _build
