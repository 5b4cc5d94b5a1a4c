"""Test the decision pipeline, the oracle and the sweeps."""

from fractions import Fraction

import pytest

from ramanujan_nagell_certifier.certificate import Rule, Status
from ramanujan_nagell_certifier.engine import (
    analyze,
    analyze_both,
    brute_force,
    congruence_elimination,
    criterion_divisor,
    criterion_square,
    density_sweep,
    even_z_check,
    even_z_exclusion,
    even_z_window,
    square_z_window,
    structure_constraints,
    sweep,
)
from ramanujan_nagell_certifier.limits import Limits
from tests.constants import (
    DENSITY_COUNTS,
    FLAGSHIP_CEILING,
    FLAGSHIP_FUNDAMENTAL,
    FLAGSHIP_G,
    FLAGSHIP_H,
    FLAGSHIP_K,
    FLAGSHIP_NARROW_H,
    FLAGSHIP_PELL,
    FLAGSHIP_PRIME,
    FLAGSHIP_RESIDUES,
)

STRUCTURE_RULES = [
    Rule.EVEN_Z_EXCLUDED,
    Rule.EVEN_Z_EXCLUDED,
    Rule.CLASS_NUMBER,
    Rule.PELL_LEAST,
    Rule.FUNDAMENTAL_SET,
]


def fixture_names(block: object) -> list[str]:
    """Names of the fixtures cited in a step's constants block."""
    assert isinstance(block, list)
    return [cited["fixture"] for cited in block if isinstance(cited, dict)]


class TestWindows:
    """Test the exact exponent windows."""

    @pytest.mark.parametrize(
        ("k", "y", "expected"),
        [(2, 3, [6]), (2, 5, [8, 10, 12]), (4, 5, [8, 10, 12]), (736, 3, [4, 6])],
    )
    def test_even_window(self, k: int, y: int, expected: list[int]) -> None:
        """Test even_z_window on hand-checked cases."""
        assert even_z_window(k, y) == expected

    @pytest.mark.parametrize(
        ("root", "y", "expected"),
        [(2, 3, [5, 7]), (2, 5, [9, 11, 13]), (3, 3, [5, 7])],
    )
    def test_square_window(self, root: int, y: int, expected: list[int]) -> None:
        """Test square_z_window on hand-checked cases."""
        assert square_z_window(root, y) == expected

    def test_window_contains_every_brute_force_solution(self) -> None:
        """Test that no even-z solution for y = 1 falls outside the window."""
        for k in range(2, 30):
            window = even_z_window(k, 1)
            for _, z in brute_force(k, 1, 12):
                if z % 2 == 0:
                    assert z in window, (k, z)

    def test_square_window_rejects_small_root(self) -> None:
        """Test the root precondition."""
        with pytest.raises(ValueError, match="at least 2"):
            square_z_window(1, 3)


class TestEvenExponents:
    """Test even_z_exclusion and even_z_check."""

    @pytest.mark.parametrize(
        ("y", "names"),
        [(3, ["cube_z4", "cube_z6"]), (5, ["fifth_z6", "fifth_z8", "fifth_z10"])],
    )
    def test_exclusion_cites_fixtures(self, y: int, names: list[str]) -> None:
        """Test that the k-independent step cites every matching fixture."""
        step = even_z_exclusion(y)
        assert step.rule == Rule.EVEN_Z_EXCLUDED
        assert step.inputs == {"y": y}
        assert fixture_names(step.constants["fixtures"]) == names

    def test_unsupported_y(self) -> None:
        """Test that y outside {3, 5} is rejected."""
        with pytest.raises(ValueError, match="y must be one of"):
            even_z_exclusion(7)

    def test_check_with_uncovered_exponent(self) -> None:
        """Test k = 4, y = 5: z = 12 lies outside the fixtures and is checked."""
        step = even_z_check(4, 5)
        assert step.constants["window"] == [8, 10, 12]
        assert step.constants["covered"] == [8, 10]
        assert step.constants["direct_checks"] == [{"z": 12, "square_root": None}]

    def test_check_fully_covered(self) -> None:
        """Test the flagship window, which the fixtures cover entirely."""
        step = even_z_check(FLAGSHIP_K, 3)
        assert step.constants["covered"] == [4, 6]
        assert step.constants["direct_checks"] == []


class TestCriteria:
    """Test the divisor and square criteria."""

    def test_divisor_applies(self) -> None:
        """Test k = 2: 2k - 1 = 3 is 3 mod 8."""
        step = criterion_divisor(2)
        assert step is not None
        assert step.constants["prime"] == 3
        assert step.constants["prime_mod_8"] == 3
        assert step.constants["jacobi_2_p"] == -1

    def test_divisor_least_prime(self) -> None:
        """Test k = 8: 15 = 3 * 5 and the least prime is cited."""
        step = criterion_divisor(8)
        assert step is not None
        assert step.constants["prime"] == 3
        assert step.constants["factorization"] == [[3, 1], [5, 1]]

    @pytest.mark.parametrize("k", [4, 9, FLAGSHIP_K])
    def test_divisor_does_not_apply(self, k: int) -> None:
        """Test k whose 2k - 1 has only primes 1 or 7 mod 8."""
        assert criterion_divisor(k) is None

    def test_square_applies(self) -> None:
        """Test k = 4 for both exponents."""
        step = criterion_square(4)
        assert step is not None
        assert step.inputs == {"k": 4}
        assert step.constants["root"] == 2
        per_y = step.constants["per_y"]
        assert isinstance(per_y, list)
        cube, fifth = per_y
        assert isinstance(cube, dict)
        assert isinstance(fifth, dict)
        assert fixture_names(cube["fixtures"]) == ["square_cube_z5"]
        assert fixture_names(fifth["fixtures"]) == [
            "square_fifth_z7",
            "square_fifth_z9",
        ]
        assert fifth["window"] == [9, 11, 13]
        assert fifth["direct_checks"] == [
            {"z": 11, "square_root": None},
            {"z": 13, "square_root": None},
        ]

    def test_square_single_y(self) -> None:
        """Test that a single exponent is recorded in the inputs."""
        step = criterion_square(9, (3,))
        assert step is not None
        assert step.inputs == {"k": 9, "y": 3}
        assert step.constants["root"] == 3

    def test_square_does_not_apply(self) -> None:
        """Test a nonsquare k."""
        assert criterion_square(FLAGSHIP_K) is None


class TestStructure:
    """Test structure_constraints and congruence_elimination."""

    @pytest.mark.parametrize("y", [3, 5])
    def test_flagship_report(self, y: int) -> None:
        """Test h(2944), the Pell unit and the single fundamental solution."""
        report = structure_constraints(FLAGSHIP_K, y)
        assert (report.h4k, report.narrow_h4k) == (FLAGSHIP_H, FLAGSHIP_NARROW_H)
        assert (report.pell.u1, report.pell.v1) == FLAGSHIP_PELL
        assert report.admissible_z1 == (1,)
        assert report.big_k == -1471
        (rep,) = report.fundamentals[1]
        assert (rep.x1, rep.y1) == FLAGSHIP_FUNDAMENTAL
        assert report.bounds[1].ceiling == FLAGSHIP_CEILING
        assert not report.all_empty

    @pytest.mark.parametrize("y", [3, 5])
    def test_flagship_residues(self, y: int) -> None:
        """Test the residues of g modulo 23 for both signs."""
        step = congruence_elimination(structure_constraints(FLAGSHIP_K, y))
        assert step is not None
        assert step.constants["prime"] == FLAGSHIP_PRIME
        assert step.constants["gcd_k_v1"] == FLAGSHIP_PRIME
        residues = step.constants["residues"]
        assert isinstance(residues, list)
        assert (
            tuple(r["g_mod_p"] for r in residues if isinstance(r, dict))
            == FLAGSHIP_RESIDUES[y]
        )

    def test_flagship_cube_g(self) -> None:
        """Test g for (2577 + 95*sqrt(736))**3."""
        step = congruence_elimination(structure_constraints(FLAGSHIP_K, 3))
        assert step is not None
        residues = step.constants["residues"]
        assert isinstance(residues, list)
        first = residues[0]
        assert isinstance(first, dict)
        assert first["g"] == FLAGSHIP_G
        assert first["lambda"] == 1

    def test_congruence_fails_for_k12(self) -> None:
        """Test k = 12: gcd(12, 2) = 2 divides g = 246."""
        report = structure_constraints(12, 3)
        assert (report.pell.u1, report.pell.v1) == (7, 2)
        assert congruence_elimination(report) is None

    def test_square_k_rejected(self) -> None:
        """Test that the structure stage needs a nonsquare k."""
        with pytest.raises(ValueError, match="nonsquare"):
            structure_constraints(9, 3)


class TestAnalyze:
    """Test analyze end to end."""

    def test_divisor_decides(self) -> None:
        """Test k = 2, y = 3."""
        verdict = analyze(2, 3)
        assert verdict.status == Status.NO_SOLUTIONS
        assert verdict.decided_by == Rule.JACOBI_DIVISOR
        assert verdict.certificate.rules() == [
            Rule.EVEN_Z_EXCLUDED,
            Rule.EVEN_Z_EXCLUDED,
            Rule.JACOBI_DIVISOR,
        ]

    def test_square_decides(self) -> None:
        """Test k = 4, y = 5."""
        verdict = analyze(4, 5)
        assert verdict.status == Status.NO_SOLUTIONS
        assert verdict.decided_by == Rule.SQUARE_K
        assert verdict.report is None

    @pytest.mark.parametrize("y", [3, 5])
    def test_flagship(self, y: int) -> None:
        """Test k = 736 through the whole structure pipeline."""
        verdict = analyze(FLAGSHIP_K, y)
        assert verdict.status == Status.NO_SOLUTIONS
        assert verdict.decided_by == Rule.CONGRUENCE_ELIM
        assert verdict.certificate.rules() == [*STRUCTURE_RULES, Rule.CONGRUENCE_ELIM]
        assert verdict.solutions == ()
        assert not verdict.budget_exceeded

    def test_inconclusive(self) -> None:
        """Test k = 12, y = 3, which no criterion settles."""
        verdict = analyze(12, 3)
        assert verdict.status == Status.INCONCLUSIVE
        assert verdict.decided_by is None
        assert not verdict.budget_exceeded
        assert verdict.certificate.rules() == [*STRUCTURE_RULES, Rule.STRUCTURE_ONLY]
        step = verdict.certificate.step(Rule.STRUCTURE_ONLY)
        assert step is not None
        assert step.constants["fundamentals"] == [[5, 2, 1]]

    def test_inconclusive_with_oracle(self) -> None:
        """Test that the oracle finds nothing for k = 12 either."""
        verdict = analyze(12, 3, z_max=20)
        assert verdict.status == Status.INCONCLUSIVE

    def test_budget_exceeded(self) -> None:
        """Test that a tiny form budget yields Inconclusive instead of raising."""
        verdict = analyze(FLAGSHIP_K, 3, limits=Limits(max_form_candidates=100))
        assert verdict.status == Status.INCONCLUSIVE
        assert verdict.budget_exceeded
        assert verdict.certificate.diagnostics
        assert verdict.certificate.rules() == [
            Rule.EVEN_Z_EXCLUDED,
            Rule.EVEN_Z_EXCLUDED,
        ]

    def test_both(self) -> None:
        """Test analyze_both ordering."""
        verdicts = analyze_both(FLAGSHIP_K)
        assert [v.y for v in verdicts] == [3, 5]

    def test_deterministic(self) -> None:
        """Test that two runs give byte-identical certificates."""
        first = analyze(FLAGSHIP_K, 5).certificate.to_json()
        assert analyze(FLAGSHIP_K, 5).certificate.to_json() == first

    @pytest.mark.parametrize(("k", "y"), [(1, 3), (0, 5), (5, 4), (5, 1)])
    def test_rejected(self, k: int, y: int) -> None:
        """Test the k and y preconditions."""
        with pytest.raises(ValueError, match="must be"):
            analyze(k, y)


class TestBruteForce:
    """Test the brute-force oracle."""

    @pytest.mark.parametrize(
        ("k", "y", "z_max", "expected"),
        [
            (5, 1, 10, [(4, 2)]),
            (2, 1, 20, [(1, 2)]),
            (2, 3, 20, []),
            (FLAGSHIP_K, 3, 30, []),
        ],
    )
    def test_examples(
        self,
        k: int,
        y: int,
        z_max: int,
        expected: list[tuple[int, int]],
    ) -> None:
        """Test hand-checked searches."""
        assert brute_force(k, y, z_max) == expected

    def test_trivial_solution_for_y1(self) -> None:
        """Test that (k - 1, 2) is the only solution with z <= 5 for y = 1."""
        for k in range(2, 201):
            assert brute_force(k, 1, 5) == [(k - 1, 2)], k

    @pytest.mark.parametrize(("y", "z_max"), [(0, 5), (3, 0)])
    def test_rejected(self, y: int, z_max: int) -> None:
        """Test the preconditions."""
        with pytest.raises(ValueError, match="must be positive"):
            brute_force(5, y, z_max)


class TestSweeps:
    """Test sweep and density_sweep."""

    def test_sweep_agrees_with_oracle(self) -> None:
        """Test k <= 100: no witnesses and no contradicted verdicts."""
        rows = sweep(2, 100, z_max=30, limits=Limits(threads=4))
        assert [(row.k, row.y) for row in rows] == [
            (k, y) for k in range(2, 101) for y in (3, 5)
        ]
        for row in rows:
            assert row.status != Status.SOLUTIONS_FOUND, (row.k, row.y)
            assert not row.conflict, (row.k, row.y)
            assert row.witnesses == ()

    def test_sweep_row_fields(self) -> None:
        """Test the CSV values of a structure-stage row."""
        (row,) = sweep(FLAGSHIP_K, FLAGSHIP_K, (3,))
        values = row.csv_row()
        assert values[:7] == [
            "736",
            "3",
            "NoSolutions",
            "CongruenceElim",
            "4",
            "24335",
            "897",
        ]

    def test_sweep_empty_range(self) -> None:
        """Test that a reversed range is rejected."""
        with pytest.raises(ValueError, match="Empty range"):
            sweep(10, 5)

    @pytest.mark.parametrize(("n", "n0"), list(DENSITY_COUNTS.items()))
    def test_density_counts(self, n: int, n0: int) -> None:
        """Test hand-counted values of N0."""
        report = density_sweep(n)
        assert report.n0 == n0
        assert report.ratio == Fraction(n0, n)
        assert report.unknown == ()

    def test_density_prefix_and_product(self) -> None:
        """Test prefix ratios and the partial product over p <= 10."""
        report = density_sweep(100, limits=Limits(density_prime_cutoff=10))
        assert report.prefix_ratios == {10: Fraction(7, 10), 100: Fraction(76, 100)}
        assert report.monotone
        assert report.partial_product == Fraction(7, 15)

    def test_density_large(self) -> None:
        """Test that the ratio for N = 10**4 stays well above one half."""
        report = density_sweep(10**4, limits=Limits(threads=4))
        assert Fraction(6, 10) < report.ratio < 1
        assert report.unknown == ()
        assert set(report.prefix_ratios) == {10, 100, 1000, 10**4}
