"""Decision pipeline for ``x**2 + (2k - 1)**y = k**z`` with ``y`` in ``{3, 5}``.

The pipeline runs cheapest first: even exponents are excluded by the sandwich
fixtures, then the Jacobi divisor criterion, the square criterion, the
fundamental-solution structure of ``X**2 - k*Y**2 = (1 - 2k)**y`` and finally
congruence elimination. Anything left over is reported as ``Inconclusive``
together with the structure data.
"""

import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import pairwise
from logging import getLogger
from math import gcd, prod

from pydantic import BaseModel, ConfigDict

from ramanujan_nagell_certifier.bigarith import (
    factorize,
    is_perfect_square,
    jacobi,
    primes_up_to,
)
from ramanujan_nagell_certifier.certificate import (
    Certificate,
    CertificateStep,
    Rule,
    Status,
)
from ramanujan_nagell_certifier.constants import CONSTANT_VALUE, SUPPORTED_Y
from ramanujan_nagell_certifier.errors import (
    BudgetExceededError,
    FactoringBudgetError,
)
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits
from ramanujan_nagell_certifier.normrep import (
    FundamentalRep,
    HeightBound,
    enumerate_fundamental,
    height_bound,
)
from ramanujan_nagell_certifier.pell import (
    PellFundamental,
    least_solution,
    require_nonsquare,
)
from ramanujan_nagell_certifier.qforms import class_number
from ramanujan_nagell_certifier.sandwich import (
    FIXTURES,
    Fixture,
    fixture_verdict,
)

logger = getLogger(__name__)

type _Witness = tuple[int, int, int]


class StructureReport(BaseModel):
    """Structure of ``X**2 - k*Y**2 = K**y`` with ``K = -(2k - 1)``.

    Attributes:
        k: The nonsquare base.
        y: The exponent.
        h4k: Class number of discriminant ``4k``.
        narrow_h4k: Narrow class number of discriminant ``4k``.
        pell: Least solution of ``U**2 - k*V**2 = 1``.
        admissible_z1: Divisors of ``y`` that divide ``h4k``.
        fundamentals: Fundamental solutions for each admissible ``Z1``.
        bounds: Height bound used for each admissible ``Z1``.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    y: int
    h4k: int
    narrow_h4k: int
    pell: PellFundamental
    admissible_z1: tuple[int, ...]
    fundamentals: dict[int, tuple[FundamentalRep, ...]]
    bounds: dict[int, HeightBound]

    @property
    def big_k(self) -> int:
        """``K = -(2k - 1)``."""
        return 1 - 2 * self.k

    @property
    def all_empty(self) -> bool:
        """Whether no admissible ``Z1`` has a fundamental solution."""
        return not any(self.fundamentals.values())


class Verdict(BaseModel):
    """Result of ``analyze`` for one ``(k, y)``.

    Attributes:
        certificate: Status, steps and any witnesses.
        report: Structure data when the pipeline got that far.
        decided_by: The rule that settled the question, if one did.
        budget_exceeded: Whether a work budget cut the pipeline short.
    """

    model_config = ConfigDict(frozen=True)

    certificate: Certificate
    report: StructureReport | None = None
    decided_by: Rule | None = None
    budget_exceeded: bool = False

    @property
    def k(self) -> int:
        """The base ``k``."""
        return self.certificate.k

    @property
    def y(self) -> int:
        """The exponent ``y``."""
        return self.certificate.y

    @property
    def status(self) -> Status:
        """The verdict."""
        return self.certificate.status

    @property
    def solutions(self) -> tuple[_Witness, ...]:
        """Witnesses ``(x, y, z)``; empty unless solutions were found."""
        return self.certificate.solutions


# region Helpers


def _validate_k(k: int) -> None:
    if k < 2:  # noqa: PLR2004
        msg = f"k must be greater than 1, got {k}"
        raise ValueError(msg)


def _validate_y(y: int) -> None:
    if y not in SUPPORTED_Y:
        msg = f"y must be one of {SUPPORTED_Y}, got {y}"
        raise ValueError(msg)


def _square_gap_root(k: int, y: int, z: int) -> int | None:
    """Return ``x > 0`` with ``x**2 = k**z - (2k - 1)**y``, if there is one."""
    gap = k**z - (2 * k - 1) ** y
    if gap < 1:
        return None
    return is_perfect_square(gap)


def _fixtures_for(y: int, s: int) -> list[Fixture]:
    return [fixture for fixture in FIXTURES if fixture.y == y and fixture.s == s]


def _cite(fixture: Fixture, limits: Limits) -> dict[str, CONSTANT_VALUE]:
    verdict = fixture_verdict(fixture.name, limits=limits)
    if not verdict.certified or verdict.threshold is None:
        msg = f"Fixture {fixture.name} did not certify"
        raise RuntimeError(msg)
    threshold = verdict.threshold
    return {
        "fixture": fixture.name,
        "z": fixture.z,
        "polynomial": str(fixture.polynomial),
        "g": str(threshold.g),
        "r": str(threshold.r),
        "branch": threshold.branch.value,
        "thresholds": list(threshold.components),
        "y0": threshold.y0,
        "scanned_max": verdict.scanned_max,
    }


def _direct_checks(k: int, y: int, zs: Iterable[int]) -> list[CONSTANT_VALUE]:
    return [{"z": z, "square_root": _square_gap_root(k, y, z)} for z in zs]


def _witnesses(step: CertificateStep, k: int) -> list[_Witness]:
    """Collect the genuine solutions recorded by a step's direct checks."""
    per_y = step.constants.get("per_y")
    blocks = per_y if isinstance(per_y, list) else [step.constants]
    found: list[_Witness] = []
    for block in blocks:
        if not isinstance(block, dict):
            continue
        y = block.get("y", step.inputs.get("y"))
        checks = block.get("direct_checks")
        if not isinstance(y, int) or not isinstance(checks, list):
            continue
        for check in checks:
            if isinstance(check, dict) and isinstance(x := check["square_root"], int):
                z = check["z"]
                if isinstance(z, int) and x * x + (2 * k - 1) ** y == k**z:
                    found.append((x, y, z))
    return found


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# endregion Helpers

# region Exponent windows


def even_z_window(k: int, y: int) -> list[int]:
    """Even ``z`` that a solution could have for this ``k``.

    With ``z = 2m``, ``(k**m - x)(k**m + x) = (2k - 1)**y`` forces
    ``2*k**m <= (2k - 1)**y + 1``, while ``x > 0`` needs ``k**z > (2k - 1)**y``.
    """
    _validate_k(k)
    base = (2 * k - 1) ** y
    window: list[int] = []
    z = 2
    while 2 * k ** (z // 2) <= base + 1:
        if k**z > base:
            window.append(z)
        z += 2
    return window


def square_z_window(root: int, y: int) -> list[int]:
    """Odd ``z`` that a solution could have for ``k = root**2``.

    Same factorization argument as ``even_z_window``, with ``k**z = (root**z)**2``.
    """
    if root < 2:  # noqa: PLR2004
        msg = f"Square root of k must be at least 2, got {root}"
        raise ValueError(msg)
    base = (2 * root * root - 1) ** y
    window: list[int] = []
    z = 1
    while 2 * root**z <= base + 1:
        if root ** (2 * z) > base:
            window.append(z)
        z += 2
    return window


# endregion Exponent windows

# region Criteria


def even_z_exclusion(y: int, *, limits: Limits = DEFAULT_LIMITS) -> CertificateStep:
    """Cite the sandwich fixtures that rule out even ``z`` for every large ``k``.

    Args:
        y: 3 or 5.
        limits: Passed to the fixture suite.

    Returns:
        An ``EvenZExcluded`` step independent of ``k``.
    """
    _validate_y(y)
    return CertificateStep(
        rule=Rule.EVEN_Z_EXCLUDED,
        inputs={"y": y},
        constants={"fixtures": [_cite(f, limits) for f in _fixtures_for(y, 1)]},
    )


def even_z_check(k: int, y: int) -> CertificateStep:
    """Settle the even exponents of ``k`` that the fixtures do not cover.

    Args:
        k: The base, greater than 1.
        y: 3 or 5.

    Returns:
        An ``EvenZExcluded`` step with the exact window and a direct
        perfect-square check for each uncovered ``z``.
    """
    _validate_k(k)
    _validate_y(y)
    covered = {f.z for f in _fixtures_for(y, 1)}
    window = even_z_window(k, y)
    uncovered = [z for z in window if z not in covered]
    return CertificateStep(
        rule=Rule.EVEN_Z_EXCLUDED,
        inputs={"k": k, "y": y},
        constants={
            "window": list(window),
            "covered": sorted(z for z in window if z in covered),
            "direct_checks": _direct_checks(k, y, uncovered),
        },
    )


def criterion_divisor(
    k: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> CertificateStep | None:
    """Look for a prime ``p = 3, 5 (mod 8)`` dividing ``2k - 1``.

    Such a ``p`` makes 2 a non-residue mod ``p`` while ``k = 1/2 (mod p)``, so
    ``x**2 = k**z (mod p)`` fails for every odd ``z``.

    Args:
        k: The base, greater than 1.
        limits: Factoring budgets.

    Returns:
        A ``JacobiDivisor`` step for the least such prime, or ``None``.
    """
    _validate_k(k)
    modulus = 2 * k - 1
    factorization = factorize(modulus, limits=limits)
    for p in factorization.primes:
        if p % 8 not in {3, 5}:
            continue
        symbol = jacobi(2, p)
        if symbol != -1:
            msg = f"Jacobi symbol (2/{p}) should be -1, got {symbol}"
            raise RuntimeError(msg)
        logger.info("k=%s: prime %s of 2k-1 is 3 or 5 mod 8.", k, p)
        return CertificateStep(
            rule=Rule.JACOBI_DIVISOR,
            inputs={"k": k},
            constants={
                "modulus": modulus,
                "factorization": [list(pair) for pair in factorization.factors],
                "prime": p,
                "prime_mod_8": p % 8,
                "jacobi_2_p": symbol,
            },
        )
    return None


def criterion_square(
    k: int,
    ys: tuple[int, ...] = SUPPORTED_Y,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> CertificateStep | None:
    """Settle odd ``z`` when ``k = l**2`` through the square fixtures.

    Args:
        k: The base, greater than 1.
        ys: Exponents to cover.
        limits: Passed to the fixture suite.

    Returns:
        A ``SquareK`` step, or ``None`` when ``k`` is not a square.
    """
    _validate_k(k)
    for y in ys:
        _validate_y(y)
    root = is_perfect_square(k)
    if root is None:
        return None

    per_y: list[CONSTANT_VALUE] = []
    for y in ys:
        fixtures = _fixtures_for(y, 2)
        covered = {f.z for f in fixtures}
        window = square_z_window(root, y)
        per_y.append(
            {
                "y": y,
                "fixtures": [_cite(f, limits) for f in fixtures],
                "window": list(window),
                "direct_checks": _direct_checks(
                    k,
                    y,
                    (z for z in window if z not in covered),
                ),
            },
        )

    inputs = {"k": k, "y": ys[0]} if len(ys) == 1 else {"k": k}
    return CertificateStep(
        rule=Rule.SQUARE_K,
        inputs=inputs,
        constants={"root": root, "per_y": per_y},
    )


# endregion Criteria

# region Structure


def structure_constraints(
    k: int,
    y: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> StructureReport:
    """Class number, Pell unit and fundamental solutions for nonsquare ``k``.

    An odd-``z`` solution gives ``X**2 - k*Y**2 = K**y`` with ``X = x``,
    ``Y = k**((z - 1) / 2)`` and ``K = -(2k - 1)``; such a solution comes
    from a fundamental one with exponent ``Z1`` dividing both ``y`` and
    ``h(4k)``.

    Args:
        k: A nonsquare base, greater than 1.
        y: 3 or 5.
        limits: Budgets for every stage.

    Returns:
        The structure report.
    """
    _validate_k(k)
    _validate_y(y)
    require_nonsquare(k)

    forms = class_number(4 * k, limits=limits)
    pell = least_solution(k, limits=limits)
    admissible = tuple(z1 for z1 in _divisors(y) if forms.h % z1 == 0)
    big_k = 1 - 2 * k
    fundamentals = {
        z1: tuple(enumerate_fundamental(k, big_k, z1, pell, limits=limits))
        for z1 in admissible
    }
    bounds = {z1: height_bound(k, big_k, z1, pell) for z1 in admissible}

    logger.info(
        "k=%s, y=%s: h(4k)=%s, Pell (%s, %s), admissible Z1 %s.",
        k,
        y,
        forms.h,
        pell.u1,
        pell.v1,
        admissible,
    )
    return StructureReport(
        k=k,
        y=y,
        h4k=forms.h,
        narrow_h4k=forms.narrow,
        pell=pell,
        admissible_z1=admissible,
        fundamentals=fundamentals,
        bounds=bounds,
    )


def _class_number_step(k: int, h: int, narrow: int) -> CertificateStep:
    return CertificateStep(
        rule=Rule.CLASS_NUMBER,
        inputs={"k": k},
        constants={"discriminant": 4 * k, "h": h, "narrow": narrow},
    )


def _pell_step(pell: PellFundamental) -> CertificateStep:
    return CertificateStep(
        rule=Rule.PELL_LEAST,
        inputs={"k": pell.d},
        constants={
            "u1": pell.u1,
            "v1": pell.v1,
            "a0": pell.a0,
            "cf_period": list(pell.cf_period),
        },
    )


def _fundamental_set_step(report: StructureReport) -> CertificateStep:
    sets: list[CONSTANT_VALUE] = [
        {
            "z1": z1,
            "height_bound": report.bounds[z1].describe(),
            "ceiling": report.bounds[z1].ceiling,
            "solutions": [[rep.x1, rep.y1, rep.z1] for rep in report.fundamentals[z1]],
        }
        for z1 in report.admissible_z1
    ]
    return CertificateStep(
        rule=Rule.FUNDAMENTAL_SET,
        inputs={"k": report.k, "y": report.y},
        constants={
            "K": report.big_k,
            "h": report.h4k,
            "admissible_z1": list(report.admissible_z1),
            "sets": sets,
            "all_empty": report.all_empty,
        },
    )


def structure_steps(report: StructureReport) -> list[CertificateStep]:
    """The ``ClassNumber``, ``PellLeast`` and ``FundamentalSet`` steps of a report."""
    return [
        _class_number_step(report.k, report.h4k, report.narrow_h4k),
        _pell_step(report.pell),
        _fundamental_set_step(report),
    ]


def congruence_elimination(
    report: StructureReport,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> CertificateStep | None:
    """Rule out every fundamental pair modulo a prime dividing ``gcd(k, V1)``.

    A solution has ``z >= 3`` because ``(2k - 1)**y > k**2``, so ``p`` divides
    ``k**((z - 1) / 2)``; it also divides ``V`` and not ``U``, which forces
    ``p`` to divide the ``sqrt(k)`` part ``g`` of
    ``(X1 + lambda*Y1*sqrt(k))**t``.

    Args:
        report: Structure data with at least one fundamental solution.
        limits: Factoring budget for ``gcd(k, V1)``.

    Returns:
        A ``CongruenceElim`` step for the least prime with every ``g``
        nonzero modulo it, or ``None``.
    """
    if report.all_empty:
        return None
    common = gcd(report.k, report.pell.v1)
    if common == 1:
        return None

    for p in factorize(common, limits=limits).primes:
        residues: list[CONSTANT_VALUE] = []
        eliminated = True
        for z1 in report.admissible_z1:
            t = report.y // z1
            for rep in report.fundamentals[z1]:
                for sign in (1, -1):
                    g = (rep.element(sign) ** t).b
                    eliminated = eliminated and g % p != 0
                    residues.append(
                        {
                            "z1": z1,
                            "t": t,
                            "x1": rep.x1,
                            "y1": rep.y1,
                            "lambda": sign,
                            "g": g,
                            "g_mod_p": g % p,
                        },
                    )
        if eliminated:
            logger.info("k=%s, y=%s: eliminated modulo %s.", report.k, report.y, p)
            return CertificateStep(
                rule=Rule.CONGRUENCE_ELIM,
                inputs={"k": report.k, "y": report.y},
                constants={
                    "gcd_k_v1": common,
                    "prime": p,
                    "z_min": 3,
                    "power_gap": (2 * report.k - 1) ** report.y - report.k**2,
                    "residues": residues,
                },
            )
        logger.debug("k=%s, y=%s: prime %s divides some g.", report.k, report.y, p)
    return None


def structure_only_step(report: StructureReport) -> CertificateStep:
    """Record the structure data when no criterion settled ``(k, y)``."""
    common = gcd(report.k, report.pell.v1)
    reason = (
        "gcd(k, V1) = 1"
        if common == 1
        else "every prime dividing gcd(k, V1) divides some g"
    )
    return CertificateStep(
        rule=Rule.STRUCTURE_ONLY,
        inputs={"k": report.k, "y": report.y},
        constants={
            "h": report.h4k,
            "pell": [report.pell.u1, report.pell.v1],
            "admissible_z1": list(report.admissible_z1),
            "fundamentals": [
                [rep.x1, rep.y1, rep.z1]
                for z1 in report.admissible_z1
                for rep in report.fundamentals[z1]
            ],
            "gcd_k_v1": common,
            "reason": reason,
        },
    )


# endregion Structure

# region Pipeline


def _verdict(  # noqa: PLR0913
    k: int,
    y: int,
    status: Status,
    steps: list[CertificateStep],
    *,
    solutions: Iterable[_Witness] = (),
    diagnostics: Iterable[str] = (),
    report: StructureReport | None = None,
    decided_by: Rule | None = None,
    budget_exceeded: bool = False,
) -> Verdict:
    certificate = Certificate(
        k=k,
        y=y,
        status=status,
        steps=tuple(steps),
        solutions=tuple(solutions),
        diagnostics=tuple(diagnostics),
    )
    logger.info("k=%s, y=%s: %s.", k, y, status)
    return Verdict(
        certificate=certificate,
        report=report,
        decided_by=decided_by,
        budget_exceeded=budget_exceeded,
    )


def analyze(  # noqa: PLR0911
    k: int,
    y: int,
    *,
    z_max: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """Decide ``x**2 + (2k - 1)**y = k**z`` as far as the criteria reach.

    Budget exhaustion never raises: the verdict is ``Inconclusive`` with
    ``budget_exceeded`` set and the reason in the certificate diagnostics.

    Args:
        k: The base, greater than 1.
        y: 3 or 5.
        z_max: When the criteria are inconclusive, search ``z <= z_max``
            for an explicit witness.
        limits: Work budgets.

    Returns:
        The verdict with its certificate.
    """
    _validate_k(k)
    _validate_y(y)

    try:
        steps = [even_z_exclusion(y, limits=limits), even_z_check(k, y)]
    except BudgetExceededError as error:
        logger.warning("k=%s, y=%s: fixture suite stopped: %s.", k, y, error)
        return _verdict(
            k,
            y,
            Status.INCONCLUSIVE,
            [],
            diagnostics=[str(error)],
            budget_exceeded=True,
        )
    if found := _witnesses(steps[-1], k):
        return _verdict(
            k,
            y,
            Status.SOLUTIONS_FOUND,
            steps,
            solutions=found,
            decided_by=Rule.EVEN_Z_EXCLUDED,
        )

    diagnostics: list[str] = []
    try:
        if (step := criterion_divisor(k, limits=limits)) is not None:
            return _verdict(
                k,
                y,
                Status.NO_SOLUTIONS,
                [*steps, step],
                decided_by=Rule.JACOBI_DIVISOR,
            )
    except FactoringBudgetError as error:
        logger.warning("k=%s: divisor criterion skipped: %s.", k, error)
        diagnostics.append(str(error))

    if (step := criterion_square(k, (y,), limits=limits)) is not None:
        steps.append(step)
        if found := _witnesses(step, k):
            return _verdict(
                k,
                y,
                Status.SOLUTIONS_FOUND,
                steps,
                solutions=found,
                decided_by=Rule.SQUARE_K,
            )
        return _verdict(
            k,
            y,
            Status.NO_SOLUTIONS,
            steps,
            diagnostics=diagnostics,
            decided_by=Rule.SQUARE_K,
        )

    report: StructureReport | None = None
    try:
        report = structure_constraints(k, y, limits=limits)
        steps.extend(structure_steps(report))
        if report.all_empty:
            return _verdict(
                k,
                y,
                Status.NO_SOLUTIONS,
                steps,
                diagnostics=diagnostics,
                report=report,
                decided_by=Rule.FUNDAMENTAL_SET,
            )
        if (step := congruence_elimination(report, limits=limits)) is not None:
            return _verdict(
                k,
                y,
                Status.NO_SOLUTIONS,
                [*steps, step],
                diagnostics=diagnostics,
                report=report,
                decided_by=Rule.CONGRUENCE_ELIM,
            )
        steps.append(structure_only_step(report))
    except BudgetExceededError as error:
        logger.warning("k=%s, y=%s: structure stage stopped: %s.", k, y, error)
        diagnostics.append(str(error))

    if z_max is not None and (oracle := brute_force(k, y, z_max)):
        return _verdict(
            k,
            y,
            Status.SOLUTIONS_FOUND,
            steps,
            solutions=[(x, y, z) for x, z in oracle],
            diagnostics=diagnostics,
            report=report,
        )
    return _verdict(
        k,
        y,
        Status.INCONCLUSIVE,
        steps,
        diagnostics=diagnostics,
        report=report,
        budget_exceeded=bool(diagnostics),
    )


def analyze_both(
    k: int,
    *,
    z_max: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[Verdict, ...]:
    """Run ``analyze`` for every supported ``y``, in order."""
    return tuple(analyze(k, y, z_max=z_max, limits=limits) for y in SUPPORTED_Y)


def brute_force(k: int, y: int, z_max: int) -> list[tuple[int, int]]:
    """Every ``(x, z)`` with ``z <= z_max`` and ``x**2 = k**z - (2k - 1)**y > 0``.

    Args:
        k: The base, greater than 1.
        y: Any positive exponent.
        z_max: Largest ``z`` tried, at least 1.

    Returns:
        The solutions ordered by ``z``.
    """
    _validate_k(k)
    if y < 1:
        msg = f"y must be positive, got {y}"
        raise ValueError(msg)
    if z_max < 1:
        msg = f"z_max must be positive, got {z_max}"
        raise ValueError(msg)
    return [
        (x, z)
        for z in range(1, z_max + 1)
        if (x := _square_gap_root(k, y, z)) is not None
    ]


# endregion Pipeline

# region Replay

type _Replayer = Callable[[dict[str, int], Limits], CertificateStep | None]


def _replay_even(inputs: dict[str, int], limits: Limits) -> CertificateStep:
    if "k" in inputs:
        return even_z_check(inputs["k"], inputs["y"])
    return even_z_exclusion(inputs["y"], limits=limits)


def _replay_square(inputs: dict[str, int], limits: Limits) -> CertificateStep | None:
    ys = (inputs["y"],) if "y" in inputs else SUPPORTED_Y
    return criterion_square(inputs["k"], ys, limits=limits)


def _replay_class_number(inputs: dict[str, int], limits: Limits) -> CertificateStep:
    forms = class_number(4 * inputs["k"], limits=limits)
    return _class_number_step(inputs["k"], forms.h, forms.narrow)


def _replay_pell(inputs: dict[str, int], limits: Limits) -> CertificateStep:
    return _pell_step(least_solution(inputs["k"], limits=limits))


def _replay_structure(
    build: Callable[[StructureReport, Limits], CertificateStep | None],
) -> _Replayer:
    def replay(inputs: dict[str, int], limits: Limits) -> CertificateStep | None:
        report = structure_constraints(inputs["k"], inputs["y"], limits=limits)
        return build(report, limits)

    return replay


_REPLAYERS: dict[Rule, _Replayer] = {
    Rule.EVEN_Z_EXCLUDED: _replay_even,
    Rule.JACOBI_DIVISOR: lambda inputs, limits: criterion_divisor(
        inputs["k"],
        limits=limits,
    ),
    Rule.SQUARE_K: _replay_square,
    Rule.CLASS_NUMBER: _replay_class_number,
    Rule.PELL_LEAST: _replay_pell,
    Rule.FUNDAMENTAL_SET: _replay_structure(
        lambda report, _: _fundamental_set_step(report),
    ),
    Rule.CONGRUENCE_ELIM: _replay_structure(
        lambda report, limits: congruence_elimination(report, limits=limits),
    ),
    Rule.STRUCTURE_ONLY: _replay_structure(
        lambda report, _: structure_only_step(report),
    ),
}


def replay_step(step: CertificateStep, *, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Rebuild ``step`` from its inputs and compare canonical JSON.

    Args:
        step: A recorded step.
        limits: Budgets for the recomputation.

    Returns:
        Whether the recomputation reproduces the step exactly.
    """
    try:
        rebuilt = _REPLAYERS[step.rule](step.inputs, limits)
    except (KeyError, ValueError, BudgetExceededError) as error:
        logger.warning("Replay of %s failed: %s.", step.rule, error)
        return False
    if rebuilt is None:
        logger.warning("Replay of %s no longer applies.", step.rule)
        return False
    return rebuilt.canonical() == step.canonical()


_DECISIVE_RULES = frozenset({Rule.JACOBI_DIVISOR, Rule.SQUARE_K, Rule.CONGRUENCE_ELIM})


def _no_solutions_problem(certificate: Certificate) -> str | None:
    k, y, steps = certificate.k, certificate.y, certificate.steps
    if certificate.solutions:
        return "NoSolutions lists solutions"
    even = [(step.rule, step.inputs) for step in steps[:2]]
    expected = [
        (Rule.EVEN_Z_EXCLUDED, {"y": y}),
        (Rule.EVEN_Z_EXCLUDED, {"k": k, "y": y}),
    ]
    if even != expected:
        return "NoSolutions needs both even-z steps first"
    last = steps[-1]
    if last.rule == Rule.FUNDAMENTAL_SET:
        if last.constants.get("all_empty") is not True:
            return "FundamentalSet step has nonempty sets"
    elif last.rule not in _DECISIVE_RULES:
        return f"NoSolutions cannot end in {last.rule}"
    for step in (steps[1], last):
        if _witnesses(step, k):
            return f"{step.rule} step records a solution"
    return None


def _inconclusive_problem(certificate: Certificate) -> str | None:
    if certificate.solutions:
        return "Inconclusive lists solutions"
    steps = certificate.steps
    structure_only = bool(steps) and steps[-1].rule == Rule.STRUCTURE_ONLY
    if not structure_only and not certificate.diagnostics:
        return "Inconclusive needs a StructureOnly step or a diagnostic"
    return None


def _solutions_problem(certificate: Certificate) -> str | None:
    k, y = certificate.k, certificate.y
    if not certificate.solutions:
        return "SolutionsFound lists no solutions"
    for x, witness_y, z in certificate.solutions:
        if witness_y != y or x < 1 or x * x + (2 * k - 1) ** y != k**z:
            return f"({x}, {witness_y}, {z}) does not solve the equation"
    return None


def _status_problem(certificate: Certificate) -> str | None:
    """Say why the status does not follow from the steps, or ``None``."""
    k, y = certificate.k, certificate.y
    for step in certificate.steps:
        if step.inputs.get("k", k) != k or step.inputs.get("y", y) != y:
            return f"{step.rule} was recorded for other inputs {step.inputs}"
    if certificate.status == Status.NO_SOLUTIONS:
        return _no_solutions_problem(certificate)
    if certificate.status == Status.INCONCLUSIVE:
        return _inconclusive_problem(certificate)
    return _solutions_problem(certificate)


def replay_certificate(
    certificate: Certificate,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    """Check the status against the steps, then replay every step.

    Args:
        certificate: A recorded certificate.
        limits: Budgets for the recomputation.

    Returns:
        Whether the status follows from the steps and every step replays.
    """
    if (problem := _status_problem(certificate)) is not None:
        logger.warning("k=%s, y=%s: %s.", certificate.k, certificate.y, problem)
        return False
    return all(replay_step(step, limits=limits) for step in certificate.steps)


# endregion Replay

# region Sweeps


class DensityReport(BaseModel):
    """How often ``2k - 1`` has a prime factor ``3`` or ``5 (mod 8)``.

    Attributes:
        n: Sweep bound.
        n0: Number of qualifying ``k <= n``.
        ratio: ``n0 / n``.
        unknown: ``k`` whose ``2k - 1`` could not be factored within budget.
        prefix_ratios: The ratio at every power of ten ``<= n``.
        monotone: Whether the prefix ratios never decrease.
        prime_cutoff: Bound on the primes in ``partial_product``.
        partial_product: ``1 - prod(1 - 1/p)`` over primes ``p = 3, 5 (mod 8)``
            up to ``prime_cutoff``.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    n0: int
    ratio: Fraction
    unknown: tuple[int, ...]
    prefix_ratios: dict[int, Fraction]
    monotone: bool
    prime_cutoff: int
    partial_product: Fraction


def _has_inert_factor(k: int, limits: Limits) -> bool | None:
    if k == 1:
        return False
    try:
        primes = factorize(2 * k - 1, limits=limits).primes
    except FactoringBudgetError as error:
        logger.warning("k=%s counted as unknown: %s.", k, error)
        return None
    return any(p % 8 in {3, 5} for p in primes)


def density_sweep(n: int, *, limits: Limits = DEFAULT_LIMITS) -> DensityReport:
    """Count ``k <= n`` settled by the divisor criterion.

    Args:
        n: Sweep bound, at least 1.
        limits: Factoring budgets, worker count and the prime cutoff.

    Returns:
        The density report.
    """
    if n < 1:
        msg = f"n must be positive, got {n}"
        raise ValueError(msg)

    with ThreadPoolExecutor(max_workers=limits.threads) as executor:
        kinds = list(
            executor.map(lambda k: _has_inert_factor(k, limits), range(1, n + 1)),
        )

    marks: set[int] = set()
    power = 10
    while power <= n:
        marks.add(power)
        power *= 10

    n0 = 0
    unknown: list[int] = []
    prefix_ratios: dict[int, Fraction] = {}
    for k, kind in enumerate(kinds, start=1):
        if kind is None:
            unknown.append(k)
        elif kind:
            n0 += 1
        if k in marks:
            prefix_ratios[k] = Fraction(n0, k)

    cutoff = limits.density_prime_cutoff
    partial = 1 - prod(
        (1 - Fraction(1, p) for p in primes_up_to(cutoff) if p % 8 in {3, 5}),
        start=Fraction(1),
    )
    return DensityReport(
        n=n,
        n0=n0,
        ratio=Fraction(n0, n),
        unknown=tuple(unknown),
        prefix_ratios=prefix_ratios,
        monotone=all(a <= b for a, b in pairwise(prefix_ratios.values())),
        prime_cutoff=cutoff,
        partial_product=partial,
    )


class SweepRow(BaseModel):
    """One ``(k, y)`` line of a sweep.

    Attributes:
        k: The base.
        y: The exponent.
        status: The verdict.
        rule_that_decided: Deciding rule, empty when none did.
        h4k: Class number when the structure stage ran.
        pell_u1: Pell ``U1`` when the structure stage ran.
        pell_v1: Pell ``V1`` when the structure stage ran.
        runtime_ms: Wall time of ``analyze``.
        witnesses: Brute-force solutions ``(x, z)`` when ``z_max`` was given.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    y: int
    status: Status
    rule_that_decided: str
    h4k: int | None = None
    pell_u1: int | None = None
    pell_v1: int | None = None
    runtime_ms: int
    witnesses: tuple[tuple[int, int], ...] = ()

    @property
    def conflict(self) -> bool:
        """A ``NoSolutions`` verdict contradicted by a brute-force witness."""
        return self.status == Status.NO_SOLUTIONS and bool(self.witnesses)

    def csv_row(self) -> list[str]:
        """Values in ``SWEEP_COLUMNS`` order."""
        return [
            str(self.k),
            str(self.y),
            self.status.value,
            self.rule_that_decided,
            "" if self.h4k is None else str(self.h4k),
            "" if self.pell_u1 is None else str(self.pell_u1),
            "" if self.pell_v1 is None else str(self.pell_v1),
            str(self.runtime_ms),
        ]


SWEEP_COLUMNS = (
    "k",
    "y",
    "status",
    "rule_that_decided",
    "h4k",
    "pell_u1",
    "pell_v1",
    "runtime_ms",
)


def _sweep_row(k: int, y: int, z_max: int | None, limits: Limits) -> SweepRow:
    start = time.perf_counter_ns()
    verdict = analyze(k, y, limits=limits)
    runtime_ms = (time.perf_counter_ns() - start) // 1_000_000
    report = verdict.report
    return SweepRow(
        k=k,
        y=y,
        status=verdict.status,
        rule_that_decided=verdict.decided_by.value if verdict.decided_by else "",
        h4k=report.h4k if report else None,
        pell_u1=report.pell.u1 if report else None,
        pell_v1=report.pell.v1 if report else None,
        runtime_ms=runtime_ms,
        witnesses=tuple(brute_force(k, y, z_max)) if z_max is not None else (),
    )


def sweep(
    k_from: int,
    k_to: int,
    ys: tuple[int, ...] = SUPPORTED_Y,
    *,
    z_max: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> list[SweepRow]:
    """Analyze every ``(k, y)`` with ``k_from <= k <= k_to``.

    Rows come back ordered by ``k`` then ``y`` whatever the thread count.

    Args:
        k_from: First ``k``, greater than 1.
        k_to: Last ``k``.
        ys: Exponents to analyze.
        z_max: Also run the brute-force oracle up to this ``z``.
        limits: Budgets and worker count.

    Returns:
        One row per ``(k, y)``.
    """
    _validate_k(k_from)
    if k_to < k_from:
        msg = f"Empty range {k_from}..{k_to}"
        raise ValueError(msg)
    for y in ys:
        _validate_y(y)

    pairs = [(k, y) for k in range(k_from, k_to + 1) for y in ys]
    with ThreadPoolExecutor(max_workers=limits.threads) as executor:
        rows = list(
            executor.map(lambda pair: _sweep_row(*pair, z_max, limits), pairs),
        )
    for row in rows:
        if row.conflict:
            logger.error(
                "k=%s, y=%s: witness %s contradicts the verdict.",
                row.k,
                row.y,
                row.witnesses,
            )
    return rows


# endregion Sweeps
