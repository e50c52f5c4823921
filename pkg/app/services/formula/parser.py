"""
Reader and writer for the line-oriented hybrid formula format.

Grammar (one clause per line, every clause terminated by 0):
    c <comment>                     comment; "c meta {json}" carries metadata
    p hybrid <n> <m> | p cnf <n> <m>
    1 -2 3 0                        CNF
    x 1 -2 3 0                      XOR (a negated literal flips parity)
    d >= <k> 1 2 3 0                at least k literals True
    d <= <k> 1 2 3 0                at most k literals True
    n 1 2 -3 0                      not-all-equal
    w <weight> <clause>             optional weight prefix
"""

import json
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import (
    ClauseNormalizationException,
    FormulaParseException,
    ModelMismatchException,
)
from app.core.logging import get_logger
from app.models.formula import (
    FALSE,
    TRUE,
    BooleanAssignment,
    Clause,
    ClauseKind,
    Formula,
    Literal,
)
from app.services.formula.normalizer import normalize_clause

logger = get_logger(__name__)

META_PREFIX = "meta "

_KIND_TOKENS = {"x": ClauseKind.XOR, "n": ClauseKind.NAE}
_CARD_TOKENS = {">=": ClauseKind.CARD_GE, "<=": ClauseKind.CARD_LE}


def parse_formula(text: str) -> Formula:
    """
    Parse a hybrid (or plain DIMACS CNF) document.

    Clauses are kept in file order and normalized eagerly so that malformed
    CARD/NAE clauses are reported with their line number.

    Raises:
        FormulaParseException: syntax error, missing header, variable out of
            range or an empty formula.
    """
    n: Optional[int] = None
    declared_m: Optional[int] = None
    dialect: Optional[str] = None
    clauses: List[Clause] = []
    comments: List[str] = []
    metadata: Optional[Dict] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            break
        if line[0] == "c" and (len(line) == 1 or line[1].isspace()):
            comment = line[1:].strip()
            if comment.startswith(META_PREFIX):
                try:
                    metadata = json.loads(comment[len(META_PREFIX) :])
                except json.JSONDecodeError as e:
                    raise FormulaParseException(
                        f"Invalid metadata block: {e.msg}", line=line_no, text=raw
                    )
            else:
                comments.append(comment)
            continue
        if line.startswith("p"):
            if n is not None:
                raise FormulaParseException("Duplicate header", line=line_no, text=raw)
            dialect, n, declared_m = _parse_header(line, line_no)
            continue
        if n is None:
            raise FormulaParseException(
                "Clause before 'p' header", line=line_no, text=raw
            )

        clause = _parse_clause(line, line_no, n, dialect)
        try:
            normalize_clause(clause, n)
        except ClauseNormalizationException as e:
            raise FormulaParseException(e.message, line=line_no, text=raw)
        clauses.append(clause)

    if n is None:
        raise FormulaParseException("Missing 'p hybrid' or 'p cnf' header")
    if not clauses:
        raise FormulaParseException("Formula has no clauses")
    if declared_m is not None and declared_m != len(clauses):
        logger.warning(
            "Clause count differs from header",
            declared=declared_m,
            found=len(clauses),
        )

    return Formula(
        n=n,
        clauses=tuple(clauses),
        comments=tuple(comments),
        metadata=metadata,
    )


def serialize_formula(formula: Formula) -> str:
    """Emit a formula in the hybrid format; parse_formula reads it back."""
    lines = [f"c {comment}".rstrip() for comment in formula.comments]
    if formula.metadata is not None:
        lines.append(f"c {META_PREFIX}{json.dumps(formula.metadata, sort_keys=True)}")
    lines.append(f"p hybrid {formula.n} {formula.m}")
    lines.extend(format_clause(clause) for clause in formula.clauses)
    return "\n".join(lines) + "\n"


def format_clause(clause: Clause) -> str:
    """Render one clause line."""
    literals = " ".join(str(lit.to_int()) for lit in clause.literals)
    if clause.kind == ClauseKind.CNF:
        body = literals
    elif clause.kind == ClauseKind.XOR:
        body = f"x {literals}"
    elif clause.kind == ClauseKind.NAE:
        body = f"n {literals}"
    else:
        op = ">=" if clause.kind == ClauseKind.CARD_GE else "<="
        body = f"d {op} {clause.threshold} {literals}"
    if clause.weight is not None:
        body = f"w {format_number(clause.weight)} {body}"
    return f"{body} 0"


def format_number(value: float) -> str:
    """Shortest text form of a weight that reads back to the same float."""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def format_model(values: BooleanAssignment) -> str:
    """Model line: -i means x_i is True (value -1), i means x_i is False."""
    literals = [str(int(v) * (i + 1)) for i, v in enumerate(values)]
    return "v " + " ".join(literals + ["0"])


def parse_model(text: str, n: int) -> BooleanAssignment:
    """
    Read a model written by format_model ("v" lines, terminated by 0).

    Raises:
        ModelMismatchException: missing, repeated or out-of-range variables.
    """
    values = np.zeros(n, dtype=np.int8)
    seen = 0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] in "cso":
            continue
        tokens = line[1:].split() if line[0] == "v" else line.split()
        for token in tokens:
            try:
                lit = int(token)
            except ValueError:
                raise ModelMismatchException(f"Invalid model token '{token}'")
            if lit == 0:
                break
            var = abs(lit)
            if var > n:
                raise ModelMismatchException(
                    f"Model mentions variable {var} > n={n}", expected=n, found=var
                )
            if values[var - 1] != 0:
                raise ModelMismatchException(f"Variable {var} assigned twice")
            values[var - 1] = TRUE if lit < 0 else FALSE
            seen += 1

    if seen != n:
        raise ModelMismatchException(
            f"Model assigns {seen} of {n} variables", expected=n, found=seen
        )
    return values


def _parse_header(line: str, line_no: int) -> Tuple[str, int, int]:
    tokens = line.split()
    if len(tokens) != 4 or tokens[0] != "p" or tokens[1] not in ("hybrid", "cnf"):
        raise FormulaParseException(
            "Header must be 'p hybrid <n> <m>' or 'p cnf <n> <m>'",
            line=line_no,
            text=line,
        )
    n = _parse_int(tokens[2], line_no, line, "variable count")
    m = _parse_int(tokens[3], line_no, line, "clause count")
    if n < 1:
        raise FormulaParseException("Variable count must be >= 1", line=line_no)
    if m < 1:
        raise FormulaParseException("Empty formulas are not accepted", line=line_no)
    return tokens[1], n, m


def _parse_clause(line: str, line_no: int, n: int, dialect: str) -> Clause:
    tokens = line.split()
    weight = None
    if tokens[0] == "w":
        if len(tokens) < 2:
            raise FormulaParseException("Missing weight", line=line_no, text=line)
        try:
            weight = float(tokens[1])
        except ValueError:
            raise FormulaParseException(
                f"Invalid weight '{tokens[1]}'", line=line_no, text=line
            )
        if not weight > 0 or not np.isfinite(weight):
            raise FormulaParseException(
                "Weights must be positive and finite", line=line_no, text=line
            )
        tokens = tokens[2:]
        if not tokens:
            raise FormulaParseException("Weight without clause", line=line_no)

    threshold = None
    kind = _KIND_TOKENS.get(tokens[0])
    if kind is not None:
        tokens = tokens[1:]
    elif tokens[0] == "d":
        if len(tokens) < 3 or tokens[1] not in _CARD_TOKENS:
            raise FormulaParseException(
                "Cardinality clause must read 'd >= k ...' or 'd <= k ...'",
                line=line_no,
                text=line,
            )
        kind = _CARD_TOKENS[tokens[1]]
        threshold = _parse_int(tokens[2], line_no, line, "threshold")
        tokens = tokens[3:]
    else:
        kind = ClauseKind.CNF

    if dialect == "cnf" and kind != ClauseKind.CNF:
        raise FormulaParseException(
            f"{kind.value} clause in a 'p cnf' document", line=line_no, text=line
        )

    literals = _parse_literals(tokens, line_no, line, n)
    return Clause(kind=kind, literals=literals, threshold=threshold, weight=weight)


def _parse_literals(
    tokens: Sequence[str], line_no: int, line: str, n: int
) -> Tuple[Literal, ...]:
    if not tokens or tokens[-1] != "0":
        raise FormulaParseException("Clause must end with 0", line=line_no, text=line)
    values = [_parse_int(t, line_no, line, "literal") for t in tokens[:-1]]
    if not values:
        raise FormulaParseException("Empty clause", line=line_no, text=line)
    for value in values:
        if value == 0:
            raise FormulaParseException(
                "Variable index 0 inside a clause", line=line_no, text=line
            )
        if abs(value) > n:
            raise FormulaParseException(
                f"Variable {abs(value)} exceeds n={n}", line=line_no, text=line
            )
    return tuple(Literal.from_int(v) for v in values)


def _parse_int(token: str, line_no: int, line: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormulaParseException(
            f"Malformed {what} '{token}'", line=line_no, text=line
        )
