"""Dense integer polynomials in one variable ``t``."""

from fractions import Fraction
from itertools import zip_longest
from typing import Self

from pydantic import BaseModel, ConfigDict, field_validator

from ramanujan_nagell_certifier.errors import BudgetExceededError
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits


class IntPolynomial(BaseModel):
    """Integer polynomial stored constant term first.

    Attributes:
        coeffs: ``coeffs[i]`` is the coefficient of ``t**i``; no trailing zeros,
            so the zero polynomial is the empty tuple.
    """

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[int, ...] = ()

    @field_validator("coeffs")
    @classmethod
    def _strip_leading_zeros(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        end = len(value)
        while end and value[end - 1] == 0:
            end -= 1
        return value[:end]

    # region Construction

    @classmethod
    def of(cls, *coeffs: int) -> Self:
        """Build a polynomial from coefficients, constant term first."""
        return cls(coeffs=coeffs)

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> Self:
        """Return ``coefficient * t**degree``."""
        return cls(coeffs=(0,) * degree + (coefficient,))

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse the CLI format: comma-separated coefficients, constant first.

        Args:
            text: For example ``"1,-6,12,-8,1"`` for ``t^4-8t^3+12t^2-6t+1``.

        Returns:
            The parsed polynomial.
        """
        parts = [part.strip() for part in text.split(",")]
        if not all(parts):
            msg = f"Empty coefficient in {text!r}"
            raise ValueError(msg)
        return cls(coeffs=tuple(int(part) for part in parts))

    # endregion Construction

    # region Properties

    @property
    def degree(self) -> int:
        """Highest index with a nonzero coefficient; ``-1`` for zero."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        """Leading coefficient; ``0`` for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        """Return whether this is the zero polynomial."""
        return not self.coeffs

    def is_monic(self) -> bool:
        """Return whether the leading coefficient is 1."""
        return self.leading == 1

    # endregion Properties

    # region Arithmetic

    def __call__(self, t: int) -> int:
        """Evaluate exactly at ``t`` by Horner's rule."""
        value = 0
        for c in reversed(self.coeffs):
            value = value * t + c
        return value

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _coerce(other)
        return IntPolynomial(
            coeffs=tuple(
                a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0)
            ),
        )

    def __radd__(self, other: int) -> IntPolynomial:
        return self + other

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(coeffs=tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        product = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product[i + j] += a * b
        return IntPolynomial(coeffs=tuple(product))

    def __rmul__(self, other: int) -> IntPolynomial:
        return self * other

    def __pow__(self, exponent: int) -> IntPolynomial:
        if exponent < 0:
            msg = f"Negative polynomial power {exponent}"
            raise ValueError(msg)
        result = IntPolynomial.of(1)
        base = self
        while exponent:
            if exponent & 1:
                result *= base
            base *= base
            exponent >>= 1
        return result

    def substitute_power(self, s: int) -> IntPolynomial:
        """Return ``P(t**s)``."""
        coeffs = [0] * (s * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            coeffs[i * s] = c
        return IntPolynomial(coeffs=tuple(coeffs))

    # endregion Arithmetic

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms: list[str] = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if i == 0:
                body = str(magnitude)
            else:
                power = "t" if i == 1 else f"t^{i}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if not terms:
                terms.append(body if sign == "+" else f"-{body}")
            else:
                terms.append(f" {sign} {body}")
        return "".join(terms)


def _coerce(value: IntPolynomial | int) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    return IntPolynomial.of(value)


class SquareDecomposition(BaseModel):
    """``F = G**2 + R`` with monic ``G`` and ``deg R < deg G``.

    Attributes:
        g: The truncated square root, present only when integral.
        r: The remainder ``F - G**2``, present only when integral.
        integral: Whether every coefficient of ``G`` is an integer.
    """

    model_config = ConfigDict(frozen=True)

    g: IntPolynomial | None
    r: IntPolynomial | None
    integral: bool


def evaluate(p: IntPolynomial, t: int) -> int:
    """Return ``p(t)`` exactly."""
    return p(t)


def truncated_square_root(f: IntPolynomial) -> SquareDecomposition:
    """Split a monic even-degree polynomial as ``G**2 + R``.

    The coefficients of ``G`` are matched from the top down over the
    rationals; integrality is decided by denominators, never by rounding.

    Args:
        f: A monic polynomial of even degree ``2n >= 2``.

    Returns:
        The decomposition, with ``G`` and ``R`` only when ``G`` is integral.
    """
    if not f.is_monic() or f.degree < 2 or f.degree % 2:  # noqa: PLR2004
        msg = f"Truncated square root needs a monic even-degree polynomial, got {f}"
        raise ValueError(msg)

    n = f.degree // 2
    g: list[Fraction] = [Fraction(0)] * (n + 1)
    g[n] = Fraction(1)
    for j in range(1, n + 1):
        cross = sum(
            (g[i] * g[2 * n - j - i] for i in range(n - j + 1, n)),
            start=Fraction(0),
        )
        g[n - j] = (f.coeffs[2 * n - j] - cross) / 2

    if any(c.denominator != 1 for c in g):
        return SquareDecomposition(g=None, r=None, integral=False)

    root = IntPolynomial(coeffs=tuple(int(c) for c in g))
    return SquareDecomposition(g=root, r=f - root * root, integral=True)


def positivity_threshold(
    p: IntPolynomial,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> int:
    """Least ``m >= 1`` with ``p(t) >= 1`` for every integer ``t >= m``.

    Positive lower coefficients only raise ``p(t)`` for ``t >= 1``, so every
    root at least 1 lies below ``1 + M / a_lead`` where ``M`` is the largest
    magnitude among the negative coefficients. The scan runs downward from
    that bound to the last nonpositive value.

    Args:
        p: A polynomial with positive leading coefficient.
        limits: ``max_sandwich_threshold`` caps the bound that is scanned.

    Returns:
        The positivity threshold ``m(p)``.

    Raises:
        BudgetExceededError: If the scan bound exceeds the sandwich budget.
    """
    lead = p.leading
    if lead <= 0:
        msg = f"Positivity threshold needs a positive leading coefficient, got {p}"
        raise ValueError(msg)

    negative = max((-c for c in p.coeffs[:-1] if c < 0), default=0)
    if not negative:
        return 1
    bound = 1 + negative // lead
    if bound > limits.max_sandwich_threshold:
        raise BudgetExceededError(
            "max_sandwich_threshold",
            limits.max_sandwich_threshold,
            f"positivity bound {bound} for {p}",
        )
    for t in range(bound, 0, -1):
        if p(t) <= 0:
            return t + 1
    return 1
