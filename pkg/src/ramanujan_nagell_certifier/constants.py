"""Constants used throughout Ramanujan-Nagell Certifier."""

type CONSTANT_VALUE = (
    dict[str, CONSTANT_VALUE] | list[CONSTANT_VALUE] | str | int | bool | None
)
"""Anything a certificate step may record as a computed constant."""

SUPPORTED_Y = (3, 5)

TRIAL_DIVISION_LIMIT = 10**6
RHO_ITERATIONS = 200_000
RHO_ATTEMPTS = 16
MAX_CF_PERIOD = 10**6
MAX_FORM_CANDIDATES = 10**7
MAX_FUNDAMENTAL_SCAN = 10**7
MAX_SANDWICH_THRESHOLD = 10**7
DENSITY_PRIME_CUTOFF = 10**4

# Miller-Rabin with these bases is exact below this bound.
DETERMINISTIC_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
DETERMINISTIC_MR_BOUND = 3_317_044_064_679_887_385_961_981
EXTRA_MR_BASES = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
