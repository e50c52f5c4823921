"""
Tests for CLI commands.
"""

import pytest
from click.testing import CliRunner

from app.cli.commands import (
    CONVENTION,
    EXIT_SAT,
    EXIT_UNKNOWN,
    cli,
    resolve_weight_rule,
)
from app.schemas.solver import WeightRule
from app.services.factories.generator_factory import gen_parity_learning
from app.services.formula.parser import parse_formula, serialize_formula

UNITS = "p cnf 2 2\n1 0\n-2 0\n"
CONTRADICTION = "p cnf 1 2\n1 0\n-1 0\n"


def report_lines(output, prefix):
    return [line for line in output.splitlines() if line.startswith(prefix)]


class TestSolveCommand:
    """Test the solve command."""

    def setup_method(self):
        """Set up test method."""
        self.runner = CliRunner()

    def test_satisfiable(self, formula_file):
        """Test a Sat run prints the model and exits with 10."""
        result = self.runner.invoke(cli, ["solve", formula_file(UNITS)])

        assert result.exit_code == EXIT_SAT
        assert report_lines(result.output, "s ") == ["s SATISFIABLE"]
        assert report_lines(result.output, "v ") == ["v -1 2 0"]
        assert report_lines(result.output, "o ") == ["o 2/2"]
        assert CONVENTION in result.output

    def test_contradiction(self, formula_file):
        """Test an unsatisfiable formula reports the best count and exits 0."""
        path = formula_file(CONTRADICTION)
        result = self.runner.invoke(
            cli, ["solve", path, "--restarts", "4", "--time-limit", "0"]
        )

        assert result.exit_code == EXIT_UNKNOWN
        assert report_lines(result.output, "s ") == ["s UNKNOWN"]
        assert report_lines(result.output, "o ") == ["o 1/2"]
        assert "c restarts 4" in result.output

    def test_stdin(self):
        """Test - reads the formula from stdin."""
        result = self.runner.invoke(cli, ["solve", "-"], input=UNITS)

        assert result.exit_code == EXIT_SAT

    def test_deterministic_output(self, formula_file):
        """Test a fixed seed and one thread give identical reports."""
        path = formula_file(CONTRADICTION)
        args = ["solve", path, "--seed", "9", "--threads", "1", "--restarts", "6"]

        first = self.runner.invoke(cli, args)
        second = self.runner.invoke(cli, args)

        assert first.output == second.output
        assert "c wall_time" not in first.output

    def test_timing(self, formula_file):
        """Test --timing adds the wall time line."""
        result = self.runner.invoke(cli, ["solve", formula_file(UNITS), "--timing"])

        assert len(report_lines(result.output, "c wall_time ")) == 1

    def test_threshold_mode(self, formula_file):
        """Test the status line of a met threshold."""
        path = formula_file(CONTRADICTION)
        result = self.runner.invoke(cli, ["solve", path, "--mode", "threshold:1"])

        assert result.exit_code == EXIT_UNKNOWN
        assert "c status ThresholdMet" in result.output

    def test_threshold_mode_with_every_clause_satisfied(self, formula_file):
        """Test a fully satisfying witness is reported Sat in threshold mode."""
        path = formula_file("p hybrid 2 2\n1 0\n2 0\n")
        result = self.runner.invoke(cli, ["solve", path, "--mode", "threshold:1"])

        assert result.exit_code == EXIT_SAT
        assert report_lines(result.output, "s ") == ["s SATISFIABLE"]
        assert report_lines(result.output, "o ") == ["o 2/2"]
        assert "c status Sat" in result.output

    @pytest.mark.parametrize(
        "text,extra",
        [
            ("p hybrid 2 1\n1 3 0\n", []),
            (UNITS, ["--mode", "threshold"]),
            (UNITS, ["--mode", "threshold:5"]),
            (UNITS, ["--weights", "explicit"]),
            (UNITS, ["--threads", "0"]),
            (UNITS, ["--eps", "-1"]),
        ],
    )
    def test_errors_exit_1(self, formula_file, text, extra):
        """Test parse and configuration errors."""
        result = self.runner.invoke(cli, ["solve", formula_file(text)] + extra)

        assert result.exit_code == 1
        assert "Error" in result.output

    def test_unknown_flag(self, formula_file):
        """Test unknown options are rejected by click."""
        result = self.runner.invoke(cli, ["solve", formula_file(UNITS), "--fast"])

        assert result.exit_code == 2

    def test_version(self):
        """Test --version."""
        result = self.runner.invoke(cli, ["--version"])

        assert result.exit_code == 0
        assert "Hybrid Descent SAT" in result.output


class TestGenCommands:
    """Test the gen subcommands."""

    def setup_method(self):
        """Set up test method."""
        self.runner = CliRunner()

    def test_vertex_cover_checks_out(self, tmp_path):
        """Test the generated certificate passes check."""
        out = tmp_path / "vc.hyb"
        generated = self.runner.invoke(
            cli, ["gen", "vc", "--n", "20", "--seed", "7", "--out", str(out)]
        )
        checked = self.runner.invoke(cli, ["check", str(out)])

        assert generated.exit_code == 0
        assert parse_formula(out.read_text()).m == 31
        assert checked.exit_code == 0
        assert "c OK" in checked.output

    def test_parity(self, tmp_path):
        """Test 2N XOR clauses whose certificate meets only the target."""
        out = tmp_path / "parity.hyb"
        self.runner.invoke(
            cli,
            ["gen", "parity", "--n", "8", "--e", "0.25", "--seed", "1"]
            + ["--out", str(out)],
        )
        formula = parse_formula(out.read_text())
        checked = self.runner.invoke(cli, ["check", str(out)])

        assert formula.m == 16
        assert formula.metadata["target_satisfied"] == 12
        assert checked.exit_code == 1
        assert report_lines(checked.output, "o ") == ["o 12/16"]
        assert "c target 12 reached" in checked.output

    def test_hybrid(self, tmp_path):
        """Test clause counts of a random hybrid instance."""
        out = tmp_path / "hybrid.hyb"
        result = self.runner.invoke(
            cli,
            ["gen", "hybrid", "--n", "50", "--r", "1.5", "--s", "0.2"]
            + ["--l", "0.1", "--k", "0.5", "--seed", "3", "--out", str(out)],
        )

        assert result.exit_code == 0
        assert parse_formula(out.read_text()).m == 75 + 10 + 1

    def test_invalid_parameters(self, tmp_path):
        """Test an odd vertex count."""
        result = self.runner.invoke(
            cli, ["gen", "vc", "--n", "9", "--out", str(tmp_path / "x.hyb")]
        )

        assert result.exit_code == 1


class TestCheckCommand:
    """Test the check command."""

    def setup_method(self):
        """Set up test method."""
        self.runner = CliRunner()

    def test_solve_then_check(self, tmp_path, formula_file):
        """Test a Sat model written by solve passes check."""
        text = "p hybrid 4 3\nx 1 2 0\nd >= 2 2 3 4 0\nn 1 3 4 0\n"
        path = formula_file(text)
        solved = self.runner.invoke(cli, ["solve", path])
        model = tmp_path / "model.txt"
        model.write_text("\n".join(report_lines(solved.output, "v ")))

        checked = self.runner.invoke(cli, ["check", path, str(model)])

        assert solved.exit_code == EXIT_SAT
        assert checked.exit_code == 0
        assert report_lines(checked.output, "o ") == ["o 3/3"]

    def test_corrupted_model(self, tmp_path, formula_file):
        """Test a violated clause fails the check."""
        model = tmp_path / "model.txt"
        model.write_text("v 1 2 0\n")

        result = self.runner.invoke(cli, ["check", formula_file(UNITS), str(model)])

        assert result.exit_code == 1
        assert "FAILED" in result.output

    def test_breakdown(self, tmp_path, formula_file):
        """Test per-kind counts add up to the o line."""
        model = tmp_path / "model.txt"
        model.write_text("v -1 -2 0\n")

        result = self.runner.invoke(cli, ["check", formula_file(UNITS), str(model)])

        assert "o 1/2" in result.output
        assert any("cnf" in line for line in report_lines(result.output, "c "))

    def test_variable_count_mismatch(self, tmp_path, formula_file):
        """Test a model for the wrong number of variables."""
        model = tmp_path / "model.txt"
        model.write_text("v -1 0\n")

        result = self.runner.invoke(cli, ["check", formula_file(UNITS), str(model)])

        assert result.exit_code == 1

    def test_target_does_not_pass_violated_clauses(self, tmp_path):
        """Test a parity model meeting the target but not every clause fails."""
        instance = gen_parity_learning(8, e=0.25, seed=1)
        path = tmp_path / "parity.hyb"
        path.write_text(serialize_formula(instance.formula))
        model = tmp_path / "model.txt"
        certificate = " ".join(str(v) for v in instance.metadata.certificate)
        model.write_text(f"v {certificate} 0\n")

        result = self.runner.invoke(cli, ["check", str(path), str(model)])

        assert result.exit_code == 1
        assert "o 12/16" in result.output
        assert "c FAILED: 12 satisfied, 16 required" in result.output
        assert "c OK" not in result.output

    def test_target_with_every_clause_satisfied(self, tmp_path, formula_file):
        """Test a target line alongside a full pass."""
        text = 'c meta {"target_satisfied": 1}\np cnf 2 2\n1 0\n-2 0\n'
        model = tmp_path / "model.txt"
        model.write_text("v -1 2 0\n")

        result = self.runner.invoke(cli, ["check", formula_file(text), str(model)])

        assert result.exit_code == 0
        assert "c target 1 reached" in result.output
        assert "c OK" in result.output

    def test_no_model_and_no_certificate(self, formula_file):
        """Test check needs a model or a certificate."""
        result = self.runner.invoke(cli, ["check", formula_file(UNITS)])

        assert result.exit_code == 2


class TestResolveWeightRule:
    """Test the auto weight rule."""

    @pytest.mark.parametrize(
        "text,choice,expected",
        [
            ("p hybrid 2 2\nw 2 1 0\nw 1 2 0\n", "auto", WeightRule.EXPLICIT),
            ("p hybrid 2 2\nw 2 1 0\n2 0\n", "auto", WeightRule.UNIFORM),
            ("p hybrid 2 2\nw 2 1 0\nw 1 2 0\n", "length", WeightRule.CLAUSE_LENGTH),
        ],
    )
    def test_resolve(self, text, choice, expected):
        """Test auto uses explicit weights only when every clause has one."""
        assert resolve_weight_rule(parse_formula(text), choice) == expected
