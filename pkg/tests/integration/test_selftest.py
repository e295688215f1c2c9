"""Integration tests for the selftest and search commands."""

from preserverlab.cli.main import run
from preserverlab.core.exceptions import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERDICT


# ============================================================================
# Selftest Command Tests
# ============================================================================


class TestSelftestCommand:
    """Tests for preserverlab selftest."""

    def test_selected_checks_pass(self, cli):
        """Test a filtered run passes and reports each check."""
        code, doc = cli("selftest", "--seed", "7", "--only", "complex_linalg", "--only", "grassmann.gap_identity")

        assert code == EXIT_OK
        assert doc["result"]["passed"] is True
        assert [c["name"] for c in doc["result"]["checks"]] == [
            "complex_linalg.herm_eig",
            "complex_linalg.svd",
            "grassmann.gap_identity",
        ]

    def test_deterministic(self, cli):
        """Test two runs with one seed give identical reports."""
        _, first = cli("selftest", "--seed", "7", "--only", "complex_linalg")
        _, second = cli("selftest", "--seed", "7", "--only", "complex_linalg")

        assert first["result"] == second["result"]

    def test_fault_injection_exits_two(self, cli):
        """Test the negative control is caught with exit code 2."""
        code, doc = cli("selftest", "--seed", "7", "--inject-fault", "--only", "constructions.generators")

        assert code == EXIT_VERDICT
        assert doc["result"]["fault_injected"] is True
        assert doc["result"]["passed"] is False

    def test_pretty_report(self, capsys):
        """Test the pretty format prints one PASS/FAIL line per check."""
        code = run(["selftest", "--seed", "7", "--only", "complex_linalg", "--format", "pretty"])
        lines = capsys.readouterr().out.strip().splitlines()

        assert code == EXIT_OK
        assert lines[0].startswith("selftest seed=7")
        assert lines[1].startswith("PASS  complex_linalg.herm_eig")
        assert lines[-1] == "all checks passed"


# ============================================================================
# Search Command Tests
# ============================================================================


class TestSearchCommand:
    """Tests for preserverlab search."""

    def test_search_small(self, cli):
        """Test a small search stays above the residual floor."""
        code, doc = cli("search", "--restarts", "2", "--unitaries", "64", "--seed", "4")

        assert code == EXIT_OK
        assert doc["result"]["best_residual"] >= 0.1
        assert doc["result"]["fit_residual"] >= 0.0
        assert doc["seed"] == 4

    def test_search_rejects_few_unitaries(self, cli):
        """Test too few sampled unitaries is a parameter error."""
        code, doc = cli("search", "--restarts", "1", "--unitaries", "12")

        assert code == EXIT_INPUT_ERROR
        assert doc["error_code"] == "BAD_PARAMETER"
