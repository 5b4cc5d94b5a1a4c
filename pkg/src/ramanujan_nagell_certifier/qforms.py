"""Class numbers of indefinite binary quadratic forms by reduced-form cycles."""

from logging import getLogger
from math import gcd

from pydantic import BaseModel, ConfigDict

from ramanujan_nagell_certifier.bigarith import is_perfect_square, isqrt
from ramanujan_nagell_certifier.errors import BudgetExceededError
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS, Limits

logger = getLogger(__name__)

type _Form = tuple[int, int, int]


class QuadForm(BaseModel):
    """The form ``a*x**2 + b*x*y + c*y**2``."""

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        """``b**2 - 4*a*c``."""
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self) -> tuple[int, int, int]:
        """Return ``(a, b, c)``."""
        return (self.a, self.b, self.c)

    def negated(self) -> QuadForm:
        """Return ``(-a, b, -c)``."""
        return QuadForm(a=-self.a, b=self.b, c=-self.c)


class FormClassData(BaseModel):
    """Class numbers of a discriminant together with the cycles behind them.

    Attributes:
        discriminant: The discriminant.
        h: Number of classes once each cycle is identified with the cycle of
            its negated forms.
        narrow: Number of proper-equivalence classes (one per cycle).
        cycles: The reduced-form cycles in discovery order.
    """

    model_config = ConfigDict(frozen=True)

    discriminant: int
    h: int
    narrow: int
    cycles: tuple[tuple[QuadForm, ...], ...]


def validate_discriminant(disc: int) -> None:
    """Raise ``ValueError`` unless ``disc`` is a positive nonsquare discriminant."""
    if disc <= 0 or disc % 4 not in {0, 1} or is_perfect_square(disc) is not None:
        msg = (
            "Expected a positive nonsquare discriminant congruent to 0 or 1 mod 4, "
            f"got {disc}"
        )
        raise ValueError(msg)


def _is_reduced(a: int, b: int, disc: int) -> bool:
    """``|sqrt(disc) - 2|a|| < b < sqrt(disc)`` by exact comparisons of squares."""
    if b <= 0 or b * b >= disc:
        return False
    twice = 2 * abs(a)
    lower_ok = (twice + b) ** 2 > disc
    upper_ok = twice <= b or (twice - b) ** 2 < disc
    return lower_ok and upper_ok


def rho(form: _Form, disc: int) -> _Form:
    """Right neighbour ``(c, b', (b'**2 - disc) / 4c)`` of a reduced form.

    ``b'`` is the largest integer below ``sqrt(disc)`` congruent to ``-b``
    modulo ``2|c|``.
    """
    _, b, c = form
    root = isqrt(disc)
    modulus = 2 * abs(c)
    b_next = root - (root + b) % modulus
    return (c, b_next, (b_next * b_next - disc) // (4 * c))


def _reduced_tuples(disc: int, limits: Limits) -> list[_Form]:
    validate_discriminant(disc)
    root = isqrt(disc)
    if root * root > limits.max_form_candidates:
        raise BudgetExceededError(
            "max_form_candidates",
            limits.max_form_candidates,
            f"reduced forms of discriminant {disc}",
        )

    forms: list[_Form] = []
    for b in range(2 - disc % 2, root + 1, 2):
        n = (disc - b * b) // 4
        for size in range(1, root + 1):
            if n % size or not _is_reduced(size, b, disc):
                continue
            for a in (size, -size):
                c = -n // a
                if gcd(gcd(a, b), c) == 1:
                    forms.append((a, b, c))
    return sorted(forms)


def reduced_forms(disc: int, *, limits: Limits = DEFAULT_LIMITS) -> list[QuadForm]:
    """All primitive reduced forms of discriminant ``disc`` in lexicographic order.

    Args:
        disc: A positive nonsquare discriminant, ``0`` or ``1`` mod 4.
        limits: ``max_form_candidates`` caps the search grid.

    Returns:
        The reduced forms.
    """
    return [QuadForm(a=a, b=b, c=c) for a, b, c in _reduced_tuples(disc, limits)]


def class_number(disc: int, *, limits: Limits = DEFAULT_LIMITS) -> FormClassData:
    """Partition the reduced forms of ``disc`` into cycles and count classes.

    Args:
        disc: A positive nonsquare discriminant, ``0`` or ``1`` mod 4.
        limits: ``max_form_candidates`` caps the search grid.

    Returns:
        The class numbers and the cycles.
    """
    forms = _reduced_tuples(disc, limits)
    reduced = set(forms)
    cycle_of: dict[_Form, int] = {}
    cycles: list[list[_Form]] = []

    for start in forms:
        if start in cycle_of:
            continue
        cycle: list[_Form] = []
        form = start
        while True:
            cycle_of[form] = len(cycles)
            cycle.append(form)
            form = rho(form, disc)
            if form not in reduced:
                msg = f"Neighbour {form} of a reduced form is not reduced ({disc})"
                raise RuntimeError(msg)
            if form == start:
                break
            if form in cycle_of:
                msg = f"Cycle from {start} entered another cycle at {form} ({disc})"
                raise RuntimeError(msg)
        cycles.append(cycle)

    # Identify each cycle with the cycle holding its negated forms.
    partner = [cycle_of[(-c[0][0], c[0][1], -c[0][2])] for c in cycles]
    h = sum(1 for i, j in enumerate(partner) if i <= j)

    logger.debug(
        "Discriminant %s: %s reduced forms, %s cycles, h=%s.",
        disc,
        len(forms),
        len(cycles),
        h,
    )
    return FormClassData(
        discriminant=disc,
        h=h,
        narrow=len(cycles),
        cycles=tuple(
            tuple(QuadForm(a=a, b=b, c=c) for a, b, c in cycle) for cycle in cycles
        ),
    )
