"""Square-sandwich decisions for ``X**2 = F(Y)`` and the built-in fixtures.

Writing ``F = G**2 + R`` with ``deg R < deg G`` traps ``X`` strictly between
consecutive values around ``G(Y)`` once ``Y`` passes a computable threshold
``Y0``; below ``Y0`` every ``Y`` is checked directly, which turns the tail
criterion into a complete decision.
"""

from concurrent.futures import ThreadPoolExecutor
from enum import StrEnum
from logging import getLogger
from threading import Lock

from pydantic import BaseModel, ConfigDict

from ramanujan_nagell_certifier.bigarith import is_perfect_square
from ramanujan_nagell_certifier.errors import (
    BudgetExceededError,
    InapplicableCriterionError,
)
from ramanujan_nagell_certifier.intpoly import (
    IntPolynomial,
    positivity_threshold,
    truncated_square_root,
)
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits

logger = getLogger(__name__)


class Branch(StrEnum):
    """Sign of the leading coefficient of the remainder ``R``."""

    POSITIVE = "positive-leading-R"
    NEGATIVE = "negative-leading-R"


class Threshold(BaseModel):
    """The threshold ``Y0`` and the three positivity thresholds behind it.

    Attributes:
        g: Truncated square root of ``F``.
        r: Remainder ``F - G**2``.
        branch: Which pair of auxiliary polynomials was used.
        components: ``m(G)``, ``m(±R)`` and ``m`` of the crossing polynomial.
        y0: The maximum of the components.
    """

    model_config = ConfigDict(frozen=True)

    g: IntPolynomial
    r: IntPolynomial
    branch: Branch
    components: tuple[int, int, int]
    y0: int


class SandwichVerdict(BaseModel):
    """Complete answer for ``X**2 = F(Y)`` in positive integers.

    Attributes:
        polynomial: The ``F`` that was decided.
        applicable: Whether the criterion's hypothesis held.
        threshold: The criterion data when applicable.
        scanned_max: Largest ``Y`` checked directly (``Y0 - 1``).
        solutions_found: Every ``(X, Y)`` with ``Y < Y0`` and ``X**2 = F(Y)``.
        reason: Why the criterion did not apply.
    """

    model_config = ConfigDict(frozen=True)

    polynomial: IntPolynomial
    applicable: bool
    threshold: Threshold | None = None
    scanned_max: int = 0
    solutions_found: tuple[tuple[int, int], ...] = ()
    reason: str | None = None

    @property
    def certified(self) -> bool:
        """Whether the verdict proves there are no solutions at all."""
        return self.applicable and not self.solutions_found


def criterion_threshold(
    f: IntPolynomial,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> Threshold:
    """Compute ``Y0`` such that ``X**2 = F(Y)`` has no solutions with ``Y >= Y0``.

    Args:
        f: A monic polynomial of even degree.
        limits: ``max_sandwich_threshold`` caps every positivity scan.

    Returns:
        The threshold and its components.
    """
    if not f.is_monic() or f.degree < 2 or f.degree % 2:  # noqa: PLR2004
        msg = f"Sandwich criterion needs a monic even-degree polynomial, got {f}"
        raise InapplicableCriterionError(msg)

    decomposition = truncated_square_root(f)
    if decomposition.g is None or decomposition.r is None:
        msg = f"Truncated square root of {f} is not integral"
        raise InapplicableCriterionError(msg)
    g, r = decomposition.g, decomposition.r
    if r.is_zero():
        msg = f"{f} is the square of {g}"
        raise InapplicableCriterionError(msg)

    if r.leading > 0:
        branch = Branch.POSITIVE
        components = (
            positivity_threshold(g, limits=limits),
            positivity_threshold(r, limits=limits),
            positivity_threshold(2 * g - r, limits=limits),
        )
    else:
        branch = Branch.NEGATIVE
        components = (
            positivity_threshold(g, limits=limits),
            positivity_threshold(-r, limits=limits),
            positivity_threshold(2 * g + r - 1, limits=limits),
        )

    return Threshold(g=g, r=r, branch=branch, components=components, y0=max(components))


def decide_no_solutions(
    f: IntPolynomial,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> SandwichVerdict:
    """Decide ``X**2 = F(Y)`` completely.

    Args:
        f: A monic polynomial of even degree.
        limits: ``max_sandwich_threshold`` caps the direct scan.

    Returns:
        The verdict; inapplicable inputs give ``applicable=False``.
    """
    try:
        threshold = criterion_threshold(f, limits=limits)
    except InapplicableCriterionError as error:
        logger.info("Sandwich criterion inapplicable: %s.", error)
        return SandwichVerdict(polynomial=f, applicable=False, reason=str(error))

    if threshold.y0 > limits.max_sandwich_threshold:
        raise BudgetExceededError(
            "max_sandwich_threshold",
            limits.max_sandwich_threshold,
            f"threshold too large: Y0={threshold.y0}",
        )

    solutions: list[tuple[int, int]] = []
    for y in range(1, threshold.y0):
        value = f(y)
        # X = 0 is not a positive integer, so F(Y) = 0 never counts.
        if value >= 1 and (root := is_perfect_square(value)) is not None:
            solutions.append((root, y))

    logger.debug(
        "Sandwich for %s: Y0=%s, %s solutions below it.",
        f,
        threshold.y0,
        len(solutions),
    )
    return SandwichVerdict(
        polynomial=f,
        applicable=True,
        threshold=threshold,
        scanned_max=threshold.y0 - 1,
        solutions_found=tuple(solutions),
    )


# region Fixtures


class Fixture(BaseModel):
    """``X**2 = t**(s*z) - (2*t**s - 1)**y``: the even-z and square-k reductions.

    Attributes:
        name: Catalogue name.
        y: Exponent of ``2k - 1``.
        z: Exponent of ``k`` (or of ``l**2`` when ``s == 2``).
        s: ``1`` for ``Y = k``, ``2`` for ``Y = l`` with ``k = l**2``.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    y: int
    z: int
    s: int

    @property
    def polynomial(self) -> IntPolynomial:
        """The polynomial ``F`` of this fixture."""
        return fixture_polynomial(self.y, self.z, self.s)


def fixture_polynomial(y: int, z: int, s: int) -> IntPolynomial:
    """Return ``t**(s*z) - (2*t**s - 1)**y``."""
    inner = IntPolynomial.of(-1, 2).substitute_power(s)
    return IntPolynomial.monomial(s * z) - inner**y


FIXTURES: tuple[Fixture, ...] = (
    Fixture(name="cube_z4", y=3, z=4, s=1),
    Fixture(name="cube_z6", y=3, z=6, s=1),
    Fixture(name="fifth_z6", y=5, z=6, s=1),
    Fixture(name="fifth_z8", y=5, z=8, s=1),
    Fixture(name="square_cube_z5", y=3, z=5, s=2),
    Fixture(name="fifth_z10", y=5, z=10, s=1),
    Fixture(name="square_fifth_z7", y=5, z=7, s=2),
    Fixture(name="square_fifth_z9", y=5, z=9, s=2),
)
FIXTURES_BY_NAME = {fixture.name: fixture for fixture in FIXTURES}


_suite_lock = Lock()
_suite_cache: dict[Limits, tuple[SandwichVerdict, ...]] = {}


def fixture_suite(limits: Limits = DEFAULT_LIMITS) -> tuple[SandwichVerdict, ...]:
    """Decide every catalogue fixture, in catalogue order.

    Fixtures are independent and run on ``limits.threads`` workers; results
    are cached per ``limits``. Concurrent first calls wait for a single run.
    """
    with _suite_lock:
        if limits not in _suite_cache:
            _suite_cache[limits] = _run_fixture_suite(limits)
        return _suite_cache[limits]


def _run_fixture_suite(limits: Limits) -> tuple[SandwichVerdict, ...]:
    logger.info("Deciding %s sandwich fixtures.", len(FIXTURES))
    with ThreadPoolExecutor(max_workers=limits.threads) as executor:
        verdicts = tuple(
            executor.map(
                lambda fixture: decide_no_solutions(fixture.polynomial, limits=limits),
                FIXTURES,
            ),
        )
    for fixture, verdict in zip(FIXTURES, verdicts, strict=True):
        if not verdict.certified:
            logger.warning("Fixture %s was not certified.", fixture.name)
    return verdicts


def fixture_verdict(
    name: str,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> SandwichVerdict:
    """Return the cached suite verdict for one catalogue fixture."""
    index = FIXTURES.index(FIXTURES_BY_NAME[name])
    return fixture_suite(limits)[index]


# endregion Fixtures
