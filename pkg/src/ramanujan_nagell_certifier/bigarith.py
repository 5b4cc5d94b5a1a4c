"""Exact integer primitives: square roots, Jacobi symbols and factorization."""

import math
from logging import getLogger
from math import gcd, prod

from pydantic import BaseModel, ConfigDict

from ramanujan_nagell_certifier.constants import (
    DETERMINISTIC_MR_BASES,
    DETERMINISTIC_MR_BOUND,
    EXTRA_MR_BASES,
)
from ramanujan_nagell_certifier.errors import FactoringBudgetError
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits

logger = getLogger(__name__)


class Factorization(BaseModel):
    """Prime factorization ordered by prime.

    Attributes:
        factors: ``(prime, exponent)`` pairs with strictly increasing primes.
    """

    model_config = ConfigDict(frozen=True)

    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        """The integer this factorization multiplies out to."""
        return prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> list[int]:
        """The distinct primes, ascending."""
        return [p for p, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        """Return the factorization as ``{prime: exponent}``."""
        return dict(self.factors)


def isqrt(n: int) -> int:
    """Return the integer square root ``s`` with ``s*s <= n < (s+1)*(s+1)``.

    Args:
        n: A nonnegative integer.

    Returns:
        The floor of the square root of ``n``.
    """
    if n < 0:
        msg = f"isqrt of negative number {n}"
        raise ValueError(msg)
    return math.isqrt(n)


def is_perfect_square(n: int) -> int | None:
    """Return the root of ``n`` when ``n`` is a perfect square, else ``None``.

    The returned root is the witness; ``0`` is a square with root ``0``.
    """
    if n < 0:
        return None
    root = isqrt(n)
    return root if root * root == n else None


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol ``(a/n)`` by quadratic reciprocity.

    Args:
        a: Any integer.
        n: A positive odd modulus.

    Returns:
        ``-1``, ``0`` or ``1``; ``0`` exactly when ``gcd(a, n) > 1``.
    """
    if n <= 0 or n % 2 == 0:
        msg = f"Jacobi symbol needs a positive odd modulus, got {n}"
        raise ValueError(msg)

    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in {3, 5}:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:  # noqa: PLR2004
            result = -result
        a %= n
    return result if n == 1 else 0


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin test, exact below ``DETERMINISTIC_MR_BOUND``.

    Above the bound extra bases are added and the answer is a strong
    probable-prime verdict.
    """
    if n < 2:  # noqa: PLR2004
        return False
    for p in DETERMINISTIC_MR_BASES:
        if n % p == 0:
            return n == p

    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    bases = DETERMINISTIC_MR_BASES
    if n >= DETERMINISTIC_MR_BOUND:
        bases += EXTRA_MR_BASES

    for base in bases:
        x = pow(base, d, n)
        if x in {1, n - 1}:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, c: int, max_iterations: int) -> int | None:
    """Find a nontrivial factor of composite ``n`` with Brent's cycle search.

    Returns:
        A factor strictly between 1 and ``n``, or ``None`` when the
        iteration budget runs out or the walk degenerates.
    """
    batch = 128
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    iterations = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += batch
        iterations += r
        r *= 2
        if g == 1 and iterations > max_iterations:
            return None

    if g == n:
        # The batched product overshot; step one at a time from the checkpoint.
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)

    return g if 1 < g < n else None


def _split_composite(n: int, limits: Limits) -> list[int]:
    """Return the prime factors (with multiplicity) of ``n`` via Pollard rho."""
    if is_probable_prime(n):
        return [n]
    if (root := is_perfect_square(n)) is not None:
        return _split_composite(root, limits) * 2

    for c in range(1, limits.rho_attempts + 1):
        factor = _brent_rho(n, c, limits.rho_iterations)
        if factor is not None:
            logger.debug("Pollard rho split %s with factor %s.", n, factor)
            return _split_composite(factor, limits) + _split_composite(
                n // factor,
                limits,
            )

    raise FactoringBudgetError(
        "rho_iterations",
        limits.rho_iterations,
        f"composite {n} survived {limits.rho_attempts} rho attempts",
    )


def factorize(n: int, *, limits: Limits = DEFAULT_LIMITS) -> Factorization:
    """Completely factor ``n``.

    Trial division runs up to ``limits.trial_division_limit``; any surviving
    composite is split by Pollard rho with Brent cycle detection.

    Args:
        n: An integer greater than 1.
        limits: Work budgets.

    Returns:
        The factorization ordered by prime.
    """
    if n <= 1:
        msg = f"Can only factor integers greater than 1, got {n}"
        raise ValueError(msg)

    counts: dict[int, int] = {}
    remaining = n
    divisor = 2
    while divisor <= limits.trial_division_limit and divisor * divisor <= remaining:
        while remaining % divisor == 0:
            counts[divisor] = counts.get(divisor, 0) + 1
            remaining //= divisor
        divisor += 1 if divisor == 2 else 2  # noqa: PLR2004

    if remaining > 1:
        if divisor * divisor > remaining:
            primes = [remaining]
        else:
            primes = _split_composite(remaining, limits)
        for p in primes:
            counts[p] = counts.get(p, 0) + 1

    return Factorization(factors=tuple(sorted(counts.items())))


def primes_up_to(n: int) -> list[int]:
    """All primes ``p <= n`` by the sieve of Eratosthenes."""
    if n < 2:  # noqa: PLR2004
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [p for p, flag in enumerate(sieve) if flag]
