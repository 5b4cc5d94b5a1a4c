"""Pell's equation ``U**2 - D*V**2 = 1`` and exact arithmetic in ``Z[sqrt(D)]``."""

from logging import getLogger
from typing import Self

from pydantic import BaseModel, ConfigDict, model_validator

from ramanujan_nagell_certifier.bigarith import is_perfect_square, isqrt
from ramanujan_nagell_certifier.errors import BudgetExceededError
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits

logger = getLogger(__name__)


def require_nonsquare(d: int) -> None:
    """Raise ``ValueError`` unless ``d >= 2`` is not a perfect square."""
    if d < 2 or is_perfect_square(d) is not None:  # noqa: PLR2004
        msg = f"Expected a nonsquare integer D >= 2, got {d}"
        raise ValueError(msg)


def sign_of(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for nonsquare ``d``, by comparing squares."""
    if a >= 0 and b >= 0:
        return 0 if a == b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # Opposite signs: the larger magnitude wins; they cannot tie.
    if a > 0:
        return 1 if a * a > b * b * d else -1
    return 1 if b * b * d > a * a else -1


class QuadInt(BaseModel):
    """The number ``a + b*sqrt(d)``.

    Attributes:
        a: Rational part.
        b: Coefficient of ``sqrt(d)``.
        d: Nonsquare radicand; arithmetic across different ``d`` is rejected.
    """

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    d: int

    @model_validator(mode="after")
    def _check_radicand(self) -> Self:
        require_nonsquare(self.d)
        return self

    def __str__(self) -> str:
        return f"{self.a} {'-' if self.b < 0 else '+'} {abs(self.b)}*sqrt({self.d})"

    @property
    def norm(self) -> int:
        """``a**2 - d*b**2``."""
        return self.a * self.a - self.d * self.b * self.b

    def _check_same_radicand(self, other: QuadInt) -> None:
        if other.d != self.d:
            msg = f"Mixed radicands {self.d} and {other.d}"
            raise ValueError(msg)

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(a=self.a * other, b=self.b * other, d=self.d)
        self._check_same_radicand(other)
        return QuadInt(
            a=self.a * other.a + self.d * self.b * other.b,
            b=self.a * other.b + self.b * other.a,
            d=self.d,
        )

    def __rmul__(self, other: int) -> QuadInt:
        return self * other

    def __neg__(self) -> QuadInt:
        return QuadInt(a=-self.a, b=-self.b, d=self.d)

    def __pow__(self, exponent: int) -> QuadInt:
        if exponent < 0:
            msg = f"Negative power {exponent} outside Z[sqrt(d)]"
            raise ValueError(msg)
        result = QuadInt(a=1, b=0, d=self.d)
        base = self
        while exponent:
            if exponent & 1:
                result *= base
            base *= base
            exponent >>= 1
        return result


def quad_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    """Exact product in ``Z[sqrt(d)]``."""
    return x * y


def quad_pow(x: QuadInt, n: int) -> QuadInt:
    """Exact ``n``-th power in ``Z[sqrt(d)]``."""
    return x**n


class PellFundamental(BaseModel):
    """The least positive solution of ``U**2 - D*V**2 = 1``.

    Attributes:
        u1: Rational part of the fundamental unit.
        v1: Coefficient of ``sqrt(d)``.
        d: The radicand.
        a0: ``floor(sqrt(d))``.
        cf_period: One full period of the continued fraction of ``sqrt(d)``.
    """

    model_config = ConfigDict(frozen=True)

    u1: int
    v1: int
    d: int
    a0: int
    cf_period: tuple[int, ...]

    @property
    def unit(self) -> QuadInt:
        """``u1 + v1*sqrt(d)``."""
        return QuadInt(a=self.u1, b=self.v1, d=self.d)


def sqrt_continued_fraction(
    d: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[int, tuple[int, ...]]:
    """Expand ``sqrt(d)`` as ``[a0; period]`` with exact integer recurrences.

    Args:
        d: A nonsquare integer ``>= 2``.
        limits: ``max_cf_period`` caps the period length.

    Returns:
        ``a0`` and the period, which ends with ``2*a0``.
    """
    require_nonsquare(d)
    a0 = isqrt(d)
    m, q, a = 0, 1, a0
    period: list[int] = []
    while a != 2 * a0:
        m = q * a - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
        if len(period) > limits.max_cf_period:
            raise BudgetExceededError(
                "max_cf_period",
                limits.max_cf_period,
                f"continued fraction of sqrt({d})",
            )
    return a0, tuple(period)


def least_solution(d: int, *, limits: Limits = DEFAULT_LIMITS) -> PellFundamental:
    """Least positive solution of ``U**2 - D*V**2 = 1``.

    The convergent ending the first period has norm ``(-1)**len(period)``;
    for an odd period it is squared to reach norm ``+1``.

    Args:
        d: A nonsquare integer ``>= 2``.
        limits: ``max_cf_period`` caps the period length.

    Returns:
        The fundamental solution with its continued-fraction period.
    """
    a0, period = sqrt_continued_fraction(d, limits=limits)

    p_prev, p = 1, a0
    q_prev, q = 0, 1
    for a in period[:-1]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev

    if len(period) % 2:
        p, q = p * p + d * q * q, 2 * p * q

    logger.debug("Least Pell solution for D=%s is (%s, %s).", d, p, q)
    return PellFundamental(u1=p, v1=q, d=d, a0=a0, cf_period=period)
