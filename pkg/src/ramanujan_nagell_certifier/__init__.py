"""Ramanujan-Nagell Certifier - certified verdicts for x^2 + (2k-1)^y = k^z."""

import logging

from ramanujan_nagell_certifier.certificate import Certificate as Certificate
from ramanujan_nagell_certifier.certificate import CertificateStep as CertificateStep
from ramanujan_nagell_certifier.certificate import Rule as Rule
from ramanujan_nagell_certifier.certificate import Status as Status
from ramanujan_nagell_certifier.engine import Verdict as Verdict
from ramanujan_nagell_certifier.engine import analyze as analyze
from ramanujan_nagell_certifier.engine import brute_force as brute_force
from ramanujan_nagell_certifier.engine import replay_certificate as replay_certificate
from ramanujan_nagell_certifier.limits import DEFAULT_LIMITS as DEFAULT_LIMITS
from ramanujan_nagell_certifier.limits import Limits as Limits

logging.getLogger(__name__).addHandler(logging.NullHandler())
