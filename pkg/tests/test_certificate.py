"""Test certificate serialization and replay."""

import json

from ramanujan_nagell_certifier.certificate import (
    Certificate,
    CertificateStep,
    Rule,
    Status,
    stringify_integers,
)
from ramanujan_nagell_certifier.engine import analyze, replay_certificate, replay_step
from tests.constants import FLAGSHIP_G, FLAGSHIP_K


class TestStringify:
    """Test stringify_integers."""

    def test_nested(self) -> None:
        """Test lists, tuples and dicts, keeping booleans and None."""
        value = {"a": [1, (2, True)], "b": {"c": None, "d": "x", "e": 10**30}}
        assert stringify_integers(value) == {
            "a": ["1", ["2", True]],
            "b": {"c": None, "d": "x", "e": str(10**30)},
        }


class TestCertificateJson:
    """Test the canonical JSON form."""

    def test_integers_are_strings(self) -> None:
        """Test that every integer is written as a decimal string."""
        text = analyze(FLAGSHIP_K, 3).certificate.to_json()
        data = json.loads(text)
        assert data["k"] == "736"
        assert data["y"] == "3"
        assert data["status"] == "NoSolutions"
        assert f'"{FLAGSHIP_G}"' in text
        assert data["steps"][-1]["rule"] == "CongruenceElim"
        assert data["steps"][-1]["constants"]["prime"] == "23"

    def test_round_trip(self) -> None:
        """Test that loading and dumping again is byte-identical."""
        text = analyze(FLAGSHIP_K, 5).certificate.to_json()
        assert Certificate.from_json(text).to_json() == text

    def test_solutions_serialized(self) -> None:
        """Test that witnesses are stringified too."""
        certificate = Certificate(
            k=5,
            y=1,
            status=Status.SOLUTIONS_FOUND,
            steps=(),
            solutions=((4, 1, 2),),
        )
        assert json.loads(certificate.to_json())["solutions"] == [["4", "1", "2"]]

    def test_step_lookup(self) -> None:
        """Test rules() and step()."""
        certificate = analyze(2, 3).certificate
        assert certificate.rules()[-1] == Rule.JACOBI_DIVISOR
        assert certificate.step(Rule.SQUARE_K) is None
        step = certificate.step(Rule.EVEN_Z_EXCLUDED)
        assert step is not None
        assert step.inputs == {"k": 2, "y": 3}


class TestReplay:
    """Test replaying certificates."""

    def test_flagship_replays(self) -> None:
        """Test that every step of the k = 736 certificates replays."""
        for y in (3, 5):
            assert replay_certificate(analyze(FLAGSHIP_K, y).certificate)

    def test_loaded_certificate_replays(self) -> None:
        """Test replay after a JSON round trip."""
        text = analyze(4, 3).certificate.to_json()
        assert replay_certificate(Certificate.from_json(text))

    def test_inconclusive_replays(self) -> None:
        """Test that StructureOnly steps replay too."""
        assert replay_certificate(analyze(12, 3).certificate)

    def test_tampered_constant(self) -> None:
        """Test that changing a recorded value breaks the replay."""
        text = analyze(FLAGSHIP_K, 3).certificate.to_json()
        tampered = text.replace(f'"{FLAGSHIP_G}"', f'"{FLAGSHIP_G + 1}"')
        assert tampered != text
        assert not replay_certificate(Certificate.from_json(tampered))

    def test_tampered_input(self) -> None:
        """Test that a step whose rule no longer applies fails."""
        step = CertificateStep(
            rule=Rule.JACOBI_DIVISOR,
            inputs={"k": 4},
            constants={"prime": 7},
        )
        assert not replay_step(step)

    def test_missing_input(self) -> None:
        """Test that a step without its inputs fails instead of raising."""
        step = CertificateStep(rule=Rule.PELL_LEAST, inputs={}, constants={})
        assert not replay_step(step)


class TestStatusConsistency:
    """Test that replay checks the status against the steps."""

    def test_forged_no_solutions(self) -> None:
        """Test an Inconclusive certificate relabelled NoSolutions."""
        text = analyze(12, 3).certificate.to_json()
        forged = text.replace('"Inconclusive"', '"NoSolutions"')
        assert forged != text
        assert not replay_certificate(Certificate.from_json(forged))

    def test_forged_solutions_found(self) -> None:
        """Test a NoSolutions certificate relabelled SolutionsFound."""
        certificate = analyze(FLAGSHIP_K, 3).certificate
        forged = certificate.model_copy(update={"status": Status.SOLUTIONS_FOUND})
        assert not replay_certificate(forged)

    def test_no_solutions_without_even_steps(self) -> None:
        """Test that dropping the even-z steps is rejected."""
        certificate = analyze(2, 3).certificate
        assert certificate.rules()[:2] == [Rule.EVEN_Z_EXCLUDED] * 2
        forged = certificate.model_copy(update={"steps": certificate.steps[2:]})
        assert all(replay_step(step) for step in forged.steps)
        assert not replay_certificate(forged)

    def test_step_for_another_k(self) -> None:
        """Test that a step replayed for a different k is rejected."""
        certificate = analyze(2, 3).certificate
        other = analyze(FLAGSHIP_K, 3).certificate
        steps = (*certificate.steps[:-1], other.steps[-1])
        forged = certificate.model_copy(update={"steps": steps})
        assert not replay_certificate(forged)

    def test_inconclusive_needs_a_reason(self) -> None:
        """Test Inconclusive with neither a StructureOnly step nor diagnostics."""
        certificate = analyze(2, 3).certificate
        forged = certificate.model_copy(update={"status": Status.INCONCLUSIVE})
        assert not replay_certificate(forged)

    def test_witnesses(self) -> None:
        """Test that SolutionsFound witnesses must solve the equation."""
        genuine = Certificate(
            k=5,
            y=1,
            status=Status.SOLUTIONS_FOUND,
            steps=(),
            solutions=((4, 1, 2),),
        )
        assert replay_certificate(genuine)
        forged = genuine.model_copy(update={"solutions": ((5, 1, 2),)})
        assert not replay_certificate(forged)
        wrong_y = genuine.model_copy(update={"solutions": ((4, 3, 2),)})
        assert not replay_certificate(wrong_y)
