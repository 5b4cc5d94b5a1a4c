"""Test the rnc command line."""

from fractions import Fraction
from pathlib import Path

import pytest

from ramanujan_nagell_certifier.certificate import Certificate, Status
from ramanujan_nagell_certifier.cli import (
    EXIT_BUDGET,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_USAGE,
    decimal,
    main,
)
from tests.constants import FLAGSHIP_BOUND_TEXT


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str]:
    """Run ``rnc`` with ``argv`` and return the exit code and stdout."""
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestAnalyzeCommand:
    """Test rnc analyze."""

    def test_json_round_trip(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --json prints a canonical certificate."""
        code, out = run(capsys, "analyze", "--k", "736", "--y", "3", "--json")
        assert code == EXIT_OK
        certificate = Certificate.from_json(out)
        assert certificate.status == Status.NO_SOLUTIONS
        assert certificate.to_json() == out.strip()

    def test_text_output(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the human-readable report for both exponents."""
        code, out = run(capsys, "analyze", "--k", "736")
        assert code == EXIT_OK
        assert "k=736, y=3: NoSolutions" in out
        assert "k=736, y=5: NoSolutions" in out
        assert "Congruence elimination (V mod p) [CongruenceElim]" in out
        assert "Even-z exclusion (square sandwich fixtures) [EvenZExcluded]" in out

    def test_inconclusive(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the exit code for an undecided pair."""
        code, out = run(capsys, "analyze", "--k", "12", "--y", "3")
        assert code == EXIT_INCONCLUSIVE
        assert "Inconclusive" in out
        assert "Structure constraints (undecided) [StructureOnly]" in out

    def test_budget(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test tiny factoring budgets on k with 2k - 1 = (10**9 + 7)(10**9 + 9)."""
        code, _ = run(
            capsys,
            "--trial-limit",
            "2",
            "--rho-iterations",
            "1",
            "analyze",
            "--k",
            "500000008000000032",
            "--y",
            "3",
        )
        assert code == EXIT_BUDGET

    def test_bad_k(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that k <= 1 is a usage error."""
        code, _ = run(capsys, "analyze", "--k", "1")
        assert code == EXIT_USAGE

    def test_unknown_flag(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that an unknown option is a usage error."""
        code, _ = run(capsys, "analyze", "--bogus")
        assert code == EXIT_USAGE


class TestToolCommands:
    """Test the single-purpose subcommands."""

    def test_verify(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the brute-force search."""
        code, out = run(capsys, "verify", "--k", "5", "--y", "1", "--zmax", "10")
        assert code == EXIT_OK
        assert "1 solution(s)" in out
        assert "x=4, z=2" in out

    def test_pell(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the least Pell solution for 736."""
        code, out = run(capsys, "pell", "--d", "736")
        assert code == EXIT_OK
        assert "(U1, V1) = (24335, 897)" in out

    def test_pell_square(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a square D is rejected."""
        code, _ = run(capsys, "pell", "--d", "4")
        assert code == EXIT_USAGE

    def test_class_number(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test h(2944) with its cycles."""
        code, out = run(capsys, "classnumber", "--disc", "2944", "--cycles")
        assert code == EXIT_OK
        assert "h = 4" in out
        assert "narrow = 8" in out
        assert "cycle 8:" in out

    def test_class_number_square(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a square discriminant is rejected."""
        code, _ = run(capsys, "classnumber", "--disc", "16")
        assert code == EXIT_USAGE

    def test_fundsols(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the fundamental solutions for D = 736, K = -1471."""
        code, out = run(capsys, "fundsols", "--d", "736", "--K=-1471")
        assert code == EXIT_OK
        assert f"bound: {FLAGSHIP_BOUND_TEXT}" in out
        assert "(2577, 95, 1)" in out

    def test_sandwich(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the criterion on F = t^4 - (2t - 1)^3."""
        code, out = run(capsys, "sandwich", "--coeffs", "1,-6,12,-8,1")
        assert code == EXIT_OK
        assert "G = t^2 - 4t - 2" in out
        assert "Y0 = 16" in out

    def test_sandwich_large_coefficients(
        self,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """Test F = (t^2 + 10^9 t)^2 + t without a long positivity scan."""
        coeffs = "0,1,1000000000000000000,2000000000,1"
        code, out = run(capsys, "sandwich", "--coeffs", coeffs)
        assert code == EXIT_OK
        assert "thresholds = [1, 1, 1], Y0 = 1" in out

    def test_sandwich_inapplicable(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a perfect square F."""
        code, out = run(capsys, "sandwich", "--coeffs", "1,2,1")
        assert code == EXIT_INCONCLUSIVE
        assert "inapplicable" in out

    def test_density(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the density report for N = 10."""
        code, out = run(capsys, "density", "--n", "10")
        assert code == EXIT_OK
        assert "N0 = 7" in out
        assert "ratio = 7/10 ~ 0.700000" in out


class TestFileCommands:
    """Test the subcommands that read or write files."""

    def test_replay(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """Test replaying a certificate written by analyze --json."""
        _, out = run(capsys, "analyze", "--k", "736", "--y", "5", "--json")
        path = tmp_path / "certificate.json"
        path.write_text(out, encoding="utf-8")
        code, out = run(capsys, "replay", "--certificate", str(path))
        assert code == EXIT_OK
        assert "step(s) replayed" in out

    def test_replay_forged_status(
        self,
        capsys: pytest.CaptureFixture[str],
        tmp_path: Path,
    ) -> None:
        """Test that an Inconclusive certificate relabelled NoSolutions fails."""
        _, out = run(capsys, "analyze", "--k", "12", "--y", "3", "--json")
        path = tmp_path / "certificate.json"
        forged = out.replace('"Inconclusive"', '"NoSolutions"')
        path.write_text(forged, encoding="utf-8")
        code, out = run(capsys, "replay", "--certificate", str(path))
        assert code == EXIT_INCONCLUSIVE
        assert "replayed" not in out

    def test_sweep_csv(
        self,
        capsys: pytest.CaptureFixture[str],
        tmp_path: Path,
    ) -> None:
        """Test the CSV written by sweep."""
        path = tmp_path / "sweep.csv"
        code, out = run(capsys, "sweep", "--from", "2", "--to", "5", "--csv", str(path))
        assert code == EXIT_OK
        assert "NoSolutions: 8" in out
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "k,y,status,rule_that_decided,h4k,pell_u1,pell_v1,runtime_ms"
        assert len(lines) == 9
        assert lines[1].startswith("2,3,NoSolutions,JacobiDivisor,")


class TestDecimal:
    """Test the fixed-point rendering of fractions."""

    @pytest.mark.parametrize(
        ("numerator", "denominator", "expected"),
        [
            (7, 10, "0.700000"),
            (7, 15, "0.466667"),
            (1, 3, "0.333333"),
            (1, 1, "1.000000"),
        ],
    )
    def test_examples(self, numerator: int, denominator: int, expected: str) -> None:
        """Test rounding half up to six places."""
        assert decimal(Fraction(numerator, denominator)) == expected
