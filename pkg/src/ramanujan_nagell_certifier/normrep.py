"""Fundamental solutions of ``X**2 - D*Y**2 = K**Z1``.

Every coprime solution of ``X**2 - D*Y**2 = K**Z`` is a power of one of
finitely many fundamental solutions times a Pell unit. A fundamental
solution ``alpha = X1 + Y1*sqrt(D)`` is pinned down by the window
``1 < |alpha / conj(alpha)| < U1 + V1*sqrt(D)``, which is the same as
``|K|**Z1 < alpha**2 < |K|**Z1 * (U1 + V1*sqrt(D))``.
"""

from logging import getLogger
from math import gcd
from typing import Self

from pydantic import BaseModel, ConfigDict, model_validator

from ramanujan_nagell_certifier.bigarith import is_perfect_square, isqrt
from ramanujan_nagell_certifier.errors import BudgetExceededError
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits
from ramanujan_nagell_certifier.pell import (
    PellFundamental,
    QuadInt,
    require_nonsquare,
    sign_of,
)

logger = getLogger(__name__)


class FundamentalRep(BaseModel):
    """A fundamental solution ``(X1, Y1, Z1)`` of ``X**2 - D*Y**2 = K**Z1``."""

    model_config = ConfigDict(frozen=True)

    x1: int
    y1: int
    z1: int
    d: int
    k: int

    @model_validator(mode="after")
    def _check_equation(self) -> Self:
        if self.x1 < 1 or self.y1 < 1:
            msg = f"Fundamental solutions are positive, got ({self.x1}, {self.y1})"
            raise ValueError(msg)
        if self.x1 * self.x1 - self.d * self.y1 * self.y1 != self.k**self.z1:
            msg = (
                f"({self.x1}, {self.y1}) does not solve "
                f"X^2 - {self.d}Y^2 = ({self.k})^{self.z1}"
            )
            raise ValueError(msg)
        if gcd(self.x1, self.y1) != 1:
            msg = f"({self.x1}, {self.y1}) is not coprime"
            raise ValueError(msg)
        return self

    def element(self, sign: int = 1) -> QuadInt:
        """Return ``X1 + sign*Y1*sqrt(D)``."""
        return QuadInt(a=self.x1, b=sign * self.y1, d=self.d)


class HeightBound(BaseModel):
    """Exact upper bound on the height of a fundamental solution.

    Attributes:
        beta: ``|K|**Z1 * (U1 + V1*sqrt(D))``; every fundamental
            ``alpha`` has ``alpha**2 < beta``.
        ceiling: Least integer ``c`` with ``c**2 >= beta``, so ``alpha < c``.
    """

    model_config = ConfigDict(frozen=True)

    beta: QuadInt
    ceiling: int

    def describe(self) -> str:
        """Human-readable form of the bound on ``X1 + Y1*sqrt(D)``."""
        return f"X1 + Y1\u221a{self.beta.d} < {self.ceiling}"


def _validate(d: int, k: int, z1: int, pell: PellFundamental) -> None:
    require_nonsquare(d)
    if k % 2 == 0 or abs(k) <= 1:
        msg = f"K must be odd with |K| > 1, got {k}"
        raise ValueError(msg)
    if gcd(d, k) != 1:
        msg = f"D={d} and K={k} must be coprime"
        raise ValueError(msg)
    if z1 < 1:
        msg = f"Z1 must be positive, got {z1}"
        raise ValueError(msg)
    if pell.d != d:
        msg = f"Pell data is for D={pell.d}, not D={d}"
        raise ValueError(msg)


def height_bound(d: int, k: int, z1: int, pell: PellFundamental) -> HeightBound:
    """Bound ``X1 + Y1*sqrt(D)`` for fundamental solutions with exponent ``z1``.

    Args:
        d: The nonsquare radicand.
        k: The odd base ``K``.
        z1: The exponent, at least 1.
        pell: Least Pell solution for ``d``.

    Returns:
        The exact bound ``beta`` and the integer ceiling of its square root.
    """
    if z1 < 1:
        msg = f"Z1 must be positive, got {z1}"
        raise ValueError(msg)
    if pell.d != d:
        msg = f"Pell data is for D={pell.d}, not D={d}"
        raise ValueError(msg)

    size = abs(k) ** z1
    beta = pell.unit * size
    ceiling = isqrt(beta.a + isqrt(beta.b * beta.b * d))
    while sign_of(ceiling * ceiling - beta.a, -beta.b, d) < 0:
        ceiling += 1
    return HeightBound(beta=beta, ceiling=ceiling)


def enumerate_fundamental(
    d: int,
    k: int,
    z1: int,
    pell: PellFundamental,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> list[FundamentalRep]:
    """List every fundamental solution of ``X**2 - D*Y**2 = K**Z1``.

    ``Y1`` runs up to ``ceiling // floor(sqrt(D)) + 1``; each candidate must
    give a perfect square ``D*Y1**2 + K**Z1`` with a coprime root and pass
    the exact window test.

    Args:
        d: The nonsquare radicand.
        k: Odd ``K`` with ``|K| > 1`` and ``gcd(D, K) = 1``.
        z1: Exponent, at least 1.
        pell: Least Pell solution for ``d``.
        limits: ``max_fundamental_scan`` caps the ``Y1`` range.

    Returns:
        The fundamental solutions ordered by ``Y1``.
    """
    _validate(d, k, z1, pell)
    target = k**z1
    size = abs(target)
    bound = height_bound(d, k, z1, pell)
    y_cap = bound.ceiling // isqrt(d) + 1
    if y_cap > limits.max_fundamental_scan:
        raise BudgetExceededError(
            "max_fundamental_scan",
            limits.max_fundamental_scan,
            f"Y1 up to {y_cap} for D={d}, K={k}, Z1={z1}",
        )

    u1, v1 = pell.u1, pell.v1
    found: list[FundamentalRep] = []
    for y in range(1, y_cap + 1):
        x = is_perfect_square(d * y * y + target)
        if not x or gcd(x, y) != 1:
            continue

        rational = x * x + d * y * y
        lower = sign_of(rational - size, 2 * x * y, d)
        upper = sign_of(rational - size * u1, 2 * x * y - size * v1, d)
        if lower == 0 or upper == 0:
            logger.warning("Solution (%s, %s) sits on the window edge; excluded.", x, y)
            continue
        if lower > 0 and upper < 0:
            found.append(FundamentalRep(x1=x, y1=y, z1=z1, d=d, k=k))

    logger.debug(
        "D=%s, K=%s, Z1=%s: %s fundamental solutions with Y1 <= %s.",
        d,
        k,
        z1,
        len(found),
        y_cap,
    )
    return found
