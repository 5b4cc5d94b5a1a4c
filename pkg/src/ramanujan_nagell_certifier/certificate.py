"""Certificate models: the serialized proof skeleton behind every verdict."""

import json
from enum import StrEnum
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, field_serializer

from ramanujan_nagell_certifier.constants import CONSTANT_VALUE  # noqa: TC001


class Rule(StrEnum):
    """The criterion a certificate step applies."""

    JACOBI_DIVISOR = "JacobiDivisor"
    SQUARE_K = "SquareK"
    EVEN_Z_EXCLUDED = "EvenZExcluded"
    CLASS_NUMBER = "ClassNumber"
    PELL_LEAST = "PellLeast"
    FUNDAMENTAL_SET = "FundamentalSet"
    CONGRUENCE_ELIM = "CongruenceElim"
    STRUCTURE_ONLY = "StructureOnly"


class Status(StrEnum):
    """Outcome of an analysis."""

    NO_SOLUTIONS = "NoSolutions"
    INCONCLUSIVE = "Inconclusive"
    SOLUTIONS_FOUND = "SolutionsFound"


def stringify_integers(value: Any) -> Any:  # noqa: ANN401
    """Recursively turn integers (but not booleans) into decimal strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [stringify_integers(item) for item in value]
    if isinstance(value, dict):
        return {key: stringify_integers(item) for key, item in value.items()}
    return value


class CertificateStep(BaseModel):
    """One replayable step: a rule, the inputs it was run on, what it computed.

    Attributes:
        rule: The criterion applied.
        inputs: Integer inputs; replaying the rule on them must reproduce
            ``constants`` exactly.
        constants: Every value the rule computed.
    """

    model_config = ConfigDict(frozen=True)

    rule: Rule
    inputs: dict[str, int]
    constants: dict[str, CONSTANT_VALUE]

    @field_serializer("inputs", "constants")
    def _serialize_integers(self, value: dict[str, Any]) -> dict[str, Any]:
        return stringify_integers(value)

    def canonical(self) -> str:
        """Canonical JSON text of this step."""
        return json.dumps(
            self.model_dump(mode="json"),
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
        )


class Certificate(BaseModel):
    """Everything needed to re-check a verdict on ``x^2 + (2k-1)^y = k^z``.

    Attributes:
        k: The base ``k``.
        y: The exponent ``y``.
        status: The verdict.
        steps: The steps in pipeline order.
        solutions: Witnesses ``(x, y, z)`` when solutions were found.
        diagnostics: Why the pipeline stopped short, when it did.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    y: int
    status: Status
    steps: tuple[CertificateStep, ...]
    solutions: tuple[tuple[int, int, int], ...] = ()
    diagnostics: tuple[str, ...] = ()

    @field_serializer("k", "y", "solutions")
    def _serialize_integers(self, value: object) -> object:
        return stringify_integers(value)

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, integers as decimal strings."""
        return json.dumps(
            self.model_dump(mode="json"),
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, text: str) -> Self:
        """Load a certificate written by ``to_json``."""
        return cls.model_validate_json(text)

    def rules(self) -> list[Rule]:
        """The rule of every step, in order."""
        return [step.rule for step in self.steps]

    def step(self, rule: Rule) -> CertificateStep | None:
        """The last step applying ``rule``, if any."""
        for step in reversed(self.steps):
            if step.rule == rule:
                return step
        return None
