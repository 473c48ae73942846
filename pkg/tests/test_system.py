"""
System Integration Tests for Bloch Verifier.

Drives the command-line interface end to end and checks the documented exit
codes: 0 all checks passed, 1 a verdict failed, 2 configuration or domain
error, 3 resource budget exceeded.
"""

import json

import pytest
from click.testing import CliRunner

from bloch_verifier import __version__
from bloch_verifier.analysis.export import dump_scenario
from bloch_verifier.analysis.scenarios import get_builtin
from bloch_verifier.cli.main import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_RESOURCE, cli

QUIET = ["--log-level", "CRITICAL"]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _json_lines(output: str):
    return [json.loads(line) for line in output.splitlines() if line.startswith("{")]


class TestRatioCommand:
    """Test the violation-ratio table."""

    def test_ratio_table(self, runner, tmp_path):
        """The table reaches 3^N and exports as CSV."""
        csv_path = tmp_path / "ratio.csv"
        result = runner.invoke(cli, QUIET + ["ratio", "--max-parties", "4", "--csv", str(csv_path)])

        assert result.exit_code == EXIT_OK, result.output
        assert "81" in result.output
        assert csv_path.read_text().splitlines()[0] == "N,separable_max,lhv_max,ratio,three_to_N"

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])

        assert result.exit_code == 0
        assert __version__ in result.output


class TestStateCommands:
    """Test tensor and scalar-product on named states."""

    def test_ghz_tensor(self, runner):
        """GHZ_3 shows its X/Y entries and is flagged as violating Sigma T^2 <= 1."""
        result = runner.invoke(cli, QUIET + ["tensor", "--state", "ghz", "-n", "3"])

        assert result.exit_code == EXIT_OK, result.output
        assert "T[xxx]" in result.output
        assert "T[zzz]" not in result.output

    def test_mixed_product_scalar_product(self, runner):
        result = runner.invoke(
            cli, QUIET + ["scalar-product", "--state", "mixed-product", "--bloch", "0.3,0.4,0.5", "-n", "2"]
        )

        assert result.exit_code == EXIT_OK, result.output

    def test_jsonl_output(self, runner):
        result = runner.invoke(cli, QUIET + ["--format", "jsonl", "scalar-product", "--state", "bell", "-n", "2"])
        records = _json_lines(result.output)

        assert result.exit_code == EXIT_OK, result.output
        assert records[-1]["record"] == "summary"
        assert any(r.get("name") == "numeric_scalar_product" for r in records)

    def test_bell_needs_two_parties(self, runner):
        result = runner.invoke(cli, QUIET + ["tensor", "--state", "bell", "-n", "3"])

        assert result.exit_code == EXIT_CONFIG

    def test_mixed_product_needs_bloch(self, runner):
        result = runner.invoke(cli, QUIET + ["tensor", "--state", "mixed-product"])

        assert result.exit_code == EXIT_CONFIG

    def test_budget_exceeded(self, runner):
        """A product grid beyond the node budget exits with the resource code."""
        result = runner.invoke(
            cli, QUIET + ["--n-theta", "30", "--n-phi", "60", "scalar-product", "-n", "3"]
        )

        assert result.exit_code == EXIT_RESOURCE


class TestLhvCommand:
    """Test hidden-variable model evaluation."""

    def test_hemispheric_model(self, runner):
        result = runner.invoke(cli, QUIET + ["lhv", "--model", "hemispheric-disagreement", "-n", "1", "-n", "2"])

        assert result.exit_code == EXIT_OK, result.output

    def test_simulator_tolerance_override_fails(self, runner):
        """A 1e-15 simulator tolerance cannot be met and exits with 1."""
        result = runner.invoke(
            cli,
            QUIET
            + [
                "--tolerance",
                "simulator_relative=1e-15",
                "lhv",
                "--model",
                "threshold-simulator",
                "--bloch",
                "0.3,-0.4,0.5",
            ],
        )

        assert result.exit_code == EXIT_FAILED

    def test_model_file(self, runner, tmp_path):
        path = tmp_path / "model.yaml"
        path.write_text("type: saturating\nresponse: {kind: sign-of-dot-product, vector: [1, 1, 0]}\n")
        result = runner.invoke(cli, QUIET + ["lhv", "--model-file", str(path), "-n", "2"])

        assert result.exit_code == EXIT_OK, result.output

    def test_bad_tolerance_syntax(self, runner):
        result = runner.invoke(cli, ["--tolerance", "exact_relative", "ratio"])

        assert result.exit_code == EXIT_CONFIG


class TestRunCommand:
    """Test scenario files and built-in scenarios."""

    def test_builtin(self, runner, tmp_path):
        result = runner.invoke(
            cli, QUIET + ["--output-dir", str(tmp_path), "run", "--builtin", "paper-main"]
        )

        assert result.exit_code == EXIT_OK, result.output
        records = _json_lines((tmp_path / "paper-main.jsonl").read_text())
        assert records[-1]["passed"] is True

    def test_scenario_file(self, runner, tmp_path):
        path = tmp_path / "recovery.yaml"
        dump_scenario(get_builtin("tensor-recovery"), path)
        result = runner.invoke(cli, QUIET + ["run", str(path), "--no-save"])

        assert result.exit_code == EXIT_OK, result.output

    def test_invalid_scenario_file(self, runner, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("name: broken\nparties: [1]\ncomputations: [teleport]\n")

        assert runner.invoke(cli, QUIET + ["run", str(path)]).exit_code == EXIT_CONFIG
        assert runner.invoke(cli, QUIET + ["run", str(tmp_path / "missing.yaml")]).exit_code == EXIT_CONFIG

    def test_needs_exactly_one_source(self, runner):
        assert runner.invoke(cli, QUIET + ["run"]).exit_code == EXIT_CONFIG


class TestVerifyCommand:
    """Test the full verification entry point."""

    def test_selected_scenarios(self, runner, tmp_path):
        result = runner.invoke(
            cli,
            QUIET
            + [
                "--output-dir",
                str(tmp_path),
                "verify",
                "--scenario",
                "paper-main",
                "--scenario",
                "orthogonality",
                "--no-properties",
            ],
        )

        assert result.exit_code == EXIT_OK, result.output
        assert "ALL CHECKS PASSED" in result.output
        assert (tmp_path / "verify.jsonl").exists()

    def test_odd_theta_grid(self, runner):
        """A 3-node theta grid keeps the hemispheric scenario passing."""
        result = runner.invoke(
            cli,
            QUIET + ["--n-theta", "3", "verify", "--scenario", "lhv-mixing-slack", "--no-properties", "--no-save"],
        )

        assert result.exit_code == EXIT_OK, result.output

    def test_verify_with_properties(self, runner, tmp_path):
        result = runner.invoke(
            cli, QUIET + ["--output-dir", str(tmp_path), "verify", "--max-parties", "2"]
        )

        assert result.exit_code == EXIT_OK, result.output

    def test_failing_tolerance(self, runner):
        result = runner.invoke(
            cli,
            QUIET
            + [
                "--tolerance",
                "simulator_relative=1e-15",
                "verify",
                "--scenario",
                "single-qubit-simulator",
                "--no-properties",
                "--no-save",
            ],
        )

        assert result.exit_code == EXIT_FAILED
        assert "CHECKS FAILED" in result.output
